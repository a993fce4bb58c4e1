/** Minimal force-directed layout: spring attraction along edges, pairwise
 * repulsion, mild centering. Pure data-in/data-out so it is unit-testable;
 * the canvas renderer just consumes positions. */

import type { Edge } from "./protocol.js";

export interface LayoutPoint {
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutOptions {
  springLength: number;
  springStrength: number;
  repulsion: number;
  centering: number;
  damping: number;
  maxSpeed: number;
}

export const DEFAULT_LAYOUT: LayoutOptions = {
  springLength: 0.1,
  springStrength: 0.08,
  repulsion: 0.0015,
  centering: 0.02,
  damping: 0.85,
  maxSpeed: 0.05,
};

/** Deterministic initial positions on a circle (stable across reloads for a
 * given node count). */
export function initialPositions(n: number): LayoutPoint[] {
  const points: LayoutPoint[] = [];
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / Math.max(n, 1);
    points.push({ x: 0.8 * Math.cos(angle), y: 0.8 * Math.sin(angle), vx: 0, vy: 0 });
  }
  return points;
}

/** Advance the layout by one tick in place. Positions live in [-1, 1]^2. */
export function layoutStep(
  points: LayoutPoint[],
  edges: Edge[],
  options: LayoutOptions = DEFAULT_LAYOUT,
): void {
  const n = points.length;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      const a = points[i];
      const b = points[j];
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const distSq = dx * dx + dy * dy + 1e-6;
      const f = options.repulsion / distSq;
      const d = Math.sqrt(distSq);
      a.vx += (f * dx) / d;
      a.vy += (f * dy) / d;
      b.vx -= (f * dx) / d;
      b.vy -= (f * dy) / d;
    }
  }
  for (const [u, v] of edges) {
    const a = points[u];
    const b = points[v];
    if (!a || !b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.sqrt(dx * dx + dy * dy) + 1e-6;
    const f = options.springStrength * (d - options.springLength);
    a.vx += (f * dx) / d;
    a.vy += (f * dy) / d;
    b.vx -= (f * dx) / d;
    b.vy -= (f * dy) / d;
  }
  for (const p of points) {
    p.vx -= options.centering * p.x;
    p.vy -= options.centering * p.y;
    p.vx *= options.damping;
    p.vy *= options.damping;
    const speed = Math.sqrt(p.vx * p.vx + p.vy * p.vy);
    if (speed > options.maxSpeed) {
      p.vx = (p.vx / speed) * options.maxSpeed;
      p.vy = (p.vy / speed) * options.maxSpeed;
    }
    p.x = Math.min(Math.max(p.x + p.vx, -1), 1);
    p.y = Math.min(Math.max(p.y + p.vy, -1), 1);
  }
}
