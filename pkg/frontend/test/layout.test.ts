import { describe, expect, it } from "vitest";

import { layoutGraph, mulberry32, CANVAS } from "../src/layout.js";
import { sequenceEdgePairs } from "../src/graphView.js";
import type { GraphSnapshot } from "../src/types.js";
import graphFixture from "../fixtures/graph.json";

const snapshot = graphFixture as GraphSnapshot;

describe("seeded layout", () => {
  it("is deterministic for a fixed snapshot", () => {
    const a = layoutGraph(snapshot);
    const b = layoutGraph(snapshot);
    expect(a).toEqual(b);
  });

  it("positions all 23 vertices inside the canvas", () => {
    const positions = layoutGraph(snapshot);
    expect(positions).toHaveLength(23);
    for (const p of positions) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(CANVAS.width);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(CANVAS.height);
    }
  });

  it("keeps the four clusters visually separated on the x axis", () => {
    const positions = layoutGraph(snapshot);
    const mean = (cluster: string) => {
      const xs = positions.filter((p) => p.cluster === cluster).map((p) => p.x);
      return xs.reduce((a, b) => a + b, 0) / xs.length;
    };
    expect(mean("Strategy")).toBeLessThan(mean("Architectural"));
    expect(mean("Architectural")).toBeLessThan(mean("Structural"));
    expect(mean("Structural")).toBeLessThan(mean("State"));
  });

  it("covers every pattern class in the snapshot", () => {
    const clusters = new Set(layoutGraph(snapshot).map((p) => p.cluster));
    expect(clusters).toEqual(new Set(["Strategy", "Architectural", "Structural", "State"]));
  });

  it("mulberry32 streams are reproducible", () => {
    const a = mulberry32(7);
    const b = mulberry32(7);
    for (let i = 0; i < 20; i += 1) {
      expect(a()).toBe(b());
    }
  });
});

describe("candidate path highlighting", () => {
  it("maps the rollback chain to its specialization hops", () => {
    const pairs = sequenceEdgePairs({
      chains: [["rollback", "checkpoint-recovery", "recovery"]],
    });
    expect(pairs).toEqual([
      ["rollback", "checkpoint-recovery"],
      ["checkpoint-recovery", "recovery"],
    ]);
    // every highlighted hop exists as a drawn specialization edge
    const drawn = new Set(
      snapshot.edges
        .filter((e) => e.kind === "Specialization")
        .map((e) => `${e.from}->${e.to}`),
    );
    for (const [from, to] of pairs) {
      expect(drawn.has(`${from}->${to}`)).toBe(true);
    }
  });
});

describe("default overlay styling", () => {
  it("ships zero conflict edges, so nothing gets the conflict style", () => {
    const conflicts = snapshot.edges.filter((e) => e.kind === "Conflict");
    expect(conflicts).toHaveLength(0);
  });

  it("draws 23 vertices across the four clusters", () => {
    expect(snapshot.vertices).toHaveLength(23);
    const byCluster = new Map<string, number>();
    for (const v of snapshot.vertices) {
      byCluster.set(v.cluster, (byCluster.get(v.cluster) ?? 0) + 1);
    }
    expect(byCluster.get("Strategy")).toBe(3);
    expect(byCluster.get("Architectural")).toBe(5);
    expect(byCluster.get("Structural")).toBe(11);
    expect(byCluster.get("State")).toBe(4);
  });
});
