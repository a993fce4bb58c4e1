/** Browser entry point: connects to the session server, renders the follower
 * graph (force-directed canvas), a live 10-bin opinion histogram, and metric
 * readouts, and exposes parameter controls. All simulation changes round-trip
 * through the protocol; this file only reads the mirror. */

import { ProtocolClient, whenOpen } from "./client.js";
import { histogramPeaks, opinionHistogram } from "./mirror.js";
import { DEFAULT_LAYOUT, initialPositions, layoutStep, LayoutPoint } from "./layout.js";
import type { MutableParams } from "./protocol.js";

const WS_URL = `ws://${location.host}/ws`;

interface Controls {
  epsilon: HTMLInputElement;
  mu: HTMLInputElement;
  p: HTMLInputElement;
  q: HTMLInputElement;
  l: HTMLInputElement;
  strategy: HTMLSelectElement;
  speed: HTMLInputElement;
  seed: HTMLInputElement;
  playPause: HTMLButtonElement;
  stepOnce: HTMLButtonElement;
  reset: HTMLButtonElement;
  readout: HTMLElement;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function opinionColor(o: number): string {
  // -1 maps to blue, +1 to red, via a perceptually simple ramp
  const t = (o + 1) / 2;
  const r = Math.round(40 + 200 * t);
  const b = Math.round(240 - 200 * t);
  return `rgb(${r},60,${b})`;
}

class App {
  private client: ProtocolClient;
  private opened: Promise<void>;
  private points: LayoutPoint[] = [];
  private playing = false;
  private busy = false;
  private n = 100;

  constructor(
    private readonly graphCanvas: HTMLCanvasElement,
    private readonly histCanvas: HTMLCanvasElement,
    private readonly controls: Controls,
  ) {
    const socket = new WebSocket(WS_URL);
    this.opened = whenOpen(socket);
    this.client = new ProtocolClient(socket);
  }

  async start(): Promise<void> {
    await this.opened;
    await this.init();
    this.bind();
    requestAnimationFrame(() => this.frame());
  }

  private async init(): Promise<void> {
    const seed = Number(this.controls.seed.value) || 1;
    await this.client.request({
      type: "init",
      params: { n: this.n, e: 4 * this.n, seed, ...this.mutableParams() },
    });
    this.points = initialPositions(this.client.mirror.opinions.length);
  }

  private mutableParams(): MutableParams {
    return {
      epsilon: Number(this.controls.epsilon.value),
      mu: Number(this.controls.mu.value),
      p: Number(this.controls.p.value),
      q: Number(this.controls.q.value),
      l: Number(this.controls.l.value),
      strategy: this.controls.strategy.value as MutableParams["strategy"],
    };
  }

  private bind(): void {
    const push = async () => {
      try {
        await this.client.request({ type: "set_params", params: this.mutableParams() });
      } catch (err) {
        this.controls.readout.textContent = String(err);
      }
    };
    for (const input of [
      this.controls.epsilon, this.controls.mu, this.controls.p,
      this.controls.q, this.controls.l,
    ]) {
      input.addEventListener("change", push);
    }
    this.controls.strategy.addEventListener("change", push);
    this.controls.playPause.addEventListener("click", () => {
      this.playing = !this.playing;
      this.controls.playPause.textContent = this.playing ? "Pause" : "Play";
    });
    this.controls.stepOnce.addEventListener("click", () => void this.advance(1));
    this.controls.reset.addEventListener("click", () => {
      this.playing = false;
      this.controls.playPause.textContent = "Play";
      void this.client
        .request({ type: "reset", seed: Number(this.controls.seed.value) || 1 })
        .then(() => {
          this.points = initialPositions(this.client.mirror.opinions.length);
        });
    });
  }

  /** One animation frame: at speed s, advance s epochs (s*N steps). */
  private async frame(): Promise<void> {
    if (this.playing && !this.busy) {
      const epochs = Math.max(1, Number(this.controls.speed.value) || 1);
      await this.advance(epochs);
    }
    layoutStep(this.points, this.client.mirror.sortedEdges(), DEFAULT_LAYOUT);
    this.render();
    requestAnimationFrame(() => this.frame());
  }

  private async advance(epochs: number): Promise<void> {
    this.busy = true;
    try {
      await this.client.request({ type: "step", n: epochs * this.n });
    } catch (err) {
      this.controls.readout.textContent = String(err);
      this.playing = false;
    } finally {
      this.busy = false;
    }
  }

  private render(): void {
    const mirror = this.client.mirror;
    const g = this.graphCanvas.getContext("2d")!;
    const { width, height } = this.graphCanvas;
    const sx = (x: number) => ((x + 1) / 2) * width;
    const sy = (y: number) => ((y + 1) / 2) * height;
    g.clearRect(0, 0, width, height);
    g.strokeStyle = "rgba(120,120,120,0.25)";
    g.lineWidth = 0.5;
    g.beginPath();
    for (const [u, v] of mirror.sortedEdges()) {
      const a = this.points[u];
      const b = this.points[v];
      if (!a || !b) continue;
      g.moveTo(sx(a.x), sy(a.y));
      g.lineTo(sx(b.x), sy(b.y));
    }
    g.stroke();
    mirror.opinions.forEach((o, i) => {
      const p = this.points[i];
      if (!p) return;
      g.fillStyle = opinionColor(o);
      g.beginPath();
      g.arc(sx(p.x), sy(p.y), 3.5, 0, 2 * Math.PI);
      g.fill();
    });

    const counts = opinionHistogram(mirror.opinions);
    const h = this.histCanvas.getContext("2d")!;
    const hw = this.histCanvas.width;
    const hh = this.histCanvas.height;
    h.clearRect(0, 0, hw, hh);
    const maxCount = Math.max(...counts, 1);
    const barWidth = hw / counts.length;
    counts.forEach((c, i) => {
      const barHeight = (c / maxCount) * (hh - 4);
      h.fillStyle = opinionColor(-1 + (2 * (i + 0.5)) / counts.length);
      h.fillRect(i * barWidth + 1, hh - barHeight, barWidth - 2, barHeight);
    });

    const m = mirror.metrics;
    if (m) {
      const seg = m.segregation === null ? "n/a" : m.segregation.toFixed(3);
      this.controls.readout.textContent =
        `t=${mirror.t}  entropy=${m.entropy.toFixed(3)}  peaks=${m.peaks} ` +
        `(local ${histogramPeaks(counts)})  segregation=${seg}  ` +
        `components=${m.components}  edges=${mirror.edgeCount}`;
    }
  }
}

export function main(): void {
  const app = new App(
    el<HTMLCanvasElement>("graph"),
    el<HTMLCanvasElement>("histogram"),
    {
      epsilon: el("epsilon"),
      mu: el("mu"),
      p: el("p"),
      q: el("q"),
      l: el("l"),
      strategy: el("strategy"),
      speed: el("speed"),
      seed: el("seed"),
      playPause: el("play-pause"),
      stepOnce: el("step-once"),
      reset: el("reset"),
      readout: el("readout"),
    },
  );
  void app.start();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", main);
}
