import { describe, expect, it } from "vitest";

import { histogramPeaks, opinionHistogram, SessionMirror } from "../src/mirror.js";
import type { StateMessage } from "../src/protocol.js";

const metrics = { entropy: 0, peaks: 1, segregation: null, components: 1 };

function state(partial: Partial<StateMessage>): StateMessage {
  return {
    type: "state",
    t: 0,
    opinions: [],
    edges_added: [],
    edges_removed: [],
    metrics,
    ...partial,
  };
}

describe("SessionMirror", () => {
  it("folds a full state into the edge set", () => {
    const mirror = new SessionMirror();
    mirror.apply(state({
      t: 0,
      opinions: [0.1, -0.2, 0.3],
      edges_added: [[0, 1], [1, 2], [2, 0]],
    }));
    expect(mirror.edgeCount).toBe(3);
    expect(mirror.hasEdge(1, 2)).toBe(true);
    expect(mirror.hasEdge(2, 1)).toBe(false);
    expect(mirror.sortedEdges()).toEqual([[0, 1], [1, 2], [2, 0]]);
  });

  it("applies removals before additions so a rewire nets out", () => {
    const mirror = new SessionMirror();
    mirror.apply(state({ edges_added: [[0, 1]] }));
    mirror.apply(state({
      t: 5,
      edges_removed: [[0, 1]],
      edges_added: [[0, 2]],
    }));
    expect(mirror.t).toBe(5);
    expect(mirror.sortedEdges()).toEqual([[0, 2]]);
  });

  it("treats re-adding a present edge as a no-op", () => {
    const mirror = new SessionMirror();
    mirror.apply(state({ edges_added: [[0, 1]] }));
    mirror.apply(state({ edges_added: [[0, 1]] }));
    expect(mirror.edgeCount).toBe(1);
  });

  it("matchesSnapshot detects both equality and drift", () => {
    const mirror = new SessionMirror();
    mirror.apply(state({ t: 10, opinions: [0.5], edges_added: [[0, 1], [1, 0]] }));
    const snapshot = state({
      t: 10,
      opinions: [0.5],
      edges_added: [[0, 1], [1, 0]],
    });
    expect(mirror.matchesSnapshot(snapshot)).toBe(true);
    expect(mirror.matchesSnapshot(state({ ...snapshot, t: 11 }))).toBe(false);
    expect(
      mirror.matchesSnapshot(state({ ...snapshot, edges_added: [[0, 1]] })),
    ).toBe(false);
    expect(
      mirror.matchesSnapshot(state({ ...snapshot, opinions: [0.4] })),
    ).toBe(false);
  });

  it("reset clears everything", () => {
    const mirror = new SessionMirror();
    mirror.apply(state({ t: 3, opinions: [1], edges_added: [[0, 1]] }));
    mirror.reset();
    expect(mirror.t).toBe(0);
    expect(mirror.edgeCount).toBe(0);
    expect(mirror.opinions).toEqual([]);
  });
});

describe("opinionHistogram", () => {
  it("bins over [-1, 1] with boundary clamping", () => {
    const counts = opinionHistogram([-1, 1, 0], 10);
    expect(counts.reduce((a, b) => a + b, 0)).toBe(3);
    expect(counts[0]).toBe(1);
    expect(counts[9]).toBe(1);
    expect(counts[5]).toBe(1);
  });

  it("is all zeros for no opinions", () => {
    expect(opinionHistogram([], 4)).toEqual([0, 0, 0, 0]);
  });
});

describe("histogramPeaks", () => {
  it("counts one peak for a unimodal histogram", () => {
    expect(histogramPeaks([0, 2, 8, 3, 0])).toBe(1);
  });

  it("counts two peaks for a bimodal histogram", () => {
    expect(histogramPeaks([9, 1, 0, 1, 8])).toBe(2);
  });

  it("ignores bumps below the height floor", () => {
    // 1 of 101 total is under the 5% floor
    expect(histogramPeaks([96, 0, 1, 0, 4])).toBe(1);
  });
});
