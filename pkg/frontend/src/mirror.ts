/** Client-side mirror of the server's simulation state. The UI never mutates
 * simulation state locally: every change round-trips through the protocol and
 * lands here via apply(). */

import type { Edge, Metrics, StateMessage } from "./protocol.js";

const edgeKey = (u: number, v: number): string => `${u},${v}`;

export class SessionMirror {
  t = 0;
  opinions: number[] = [];
  metrics: Metrics | null = null;
  private edgeSet = new Map<string, Edge>();

  /** Fold a state message into the mirror. Full states (after init/reset and
   * every snapshot) list the whole edge set in edges_added with
   * edges_removed empty; delta states list net changes. Both fold with the
   * same remove-then-add rule because re-adding a present edge is a no-op. */
  apply(msg: StateMessage): void {
    this.t = msg.t;
    this.opinions = msg.opinions;
    this.metrics = msg.metrics;
    for (const [u, v] of msg.edges_removed) {
      this.edgeSet.delete(edgeKey(u, v));
    }
    for (const [u, v] of msg.edges_added) {
      this.edgeSet.set(edgeKey(u, v), [u, v]);
    }
  }

  reset(): void {
    this.t = 0;
    this.opinions = [];
    this.metrics = null;
    this.edgeSet.clear();
  }

  get edgeCount(): number {
    return this.edgeSet.size;
  }

  hasEdge(u: number, v: number): boolean {
    return this.edgeSet.has(edgeKey(u, v));
  }

  /** Edges in (source, target) lexicographic order, matching the order the
   * server uses for full edge lists. */
  sortedEdges(): Edge[] {
    return [...this.edgeSet.values()].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  }

  /** True iff a full state message describes exactly this mirror. */
  matchesSnapshot(snapshot: StateMessage): boolean {
    if (snapshot.t !== this.t) return false;
    if (snapshot.edges_removed.length > 0) return false;
    if (snapshot.opinions.length !== this.opinions.length) return false;
    if (!snapshot.opinions.every((o, i) => o === this.opinions[i])) return false;
    const mine = this.sortedEdges();
    if (snapshot.edges_added.length !== mine.length) return false;
    return snapshot.edges_added.every(
      ([u, v], i) => mine[i][0] === u && mine[i][1] === v,
    );
  }
}

/** Histogram of opinion values over [-1, 1]; out-of-range values clamp to the
 * boundary bins, matching the server's series export. */
export function opinionHistogram(opinions: number[], bins = 10): number[] {
  const counts = new Array<number>(bins).fill(0);
  for (const o of opinions) {
    const idx = Math.floor(((o + 1) / 2) * bins);
    counts[Math.min(Math.max(idx, 0), bins - 1)] += 1;
  }
  return counts;
}

/** Count local maxima of a histogram that clear a height floor (fraction of
 * the total count); mirrors the server's peak metric closely enough to drive
 * the readout between state messages. */
export function histogramPeaks(counts: number[], minHeightFraction = 0.05): number {
  const total = counts.reduce((a, b) => a + b, 0);
  const floor = minHeightFraction * total;
  let peaks = 0;
  for (let i = 0; i < counts.length; i++) {
    if (counts[i] === 0 || counts[i] < floor) continue;
    const left = i > 0 ? counts[i - 1] : -1;
    const right = i < counts.length - 1 ? counts[i + 1] : -1;
    if (counts[i] > left && counts[i] > right) peaks += 1;
  }
  return peaks;
}
