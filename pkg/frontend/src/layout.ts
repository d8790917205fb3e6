/** Deterministic force-directed layout, seeded per class cluster.
 * Positions are presentation-only; the same snapshot always lays out the
 * same way so visual diffs are meaningful. */

import type { GraphSnapshot, PatternClass } from "./types.js";

export interface NodePosition {
  id: string;
  cluster: PatternClass;
  x: number;
  y: number;
}

export const LAYOUT_SEED = 42;
export const CANVAS = { width: 960, height: 640 } as const;

/** Horizontal bands per cluster: abstract layers left, state at right. */
const CLUSTER_ANCHORS: Record<PatternClass, { x: number; y: number }> = {
  Strategy: { x: 140, y: 320 },
  Architectural: { x: 400, y: 320 },
  Structural: { x: 680, y: 320 },
  State: { x: 880, y: 320 },
};

/** mulberry32: tiny deterministic PRNG, enough for jittered seeding. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ITERATIONS = 220;
const REPULSION = 5200;
const SPRING = 0.015;
const SPRING_LENGTH = 110;
const ANCHOR_PULL = 0.055;
const DAMPING = 0.82;

export function layoutGraph(snapshot: GraphSnapshot, seed: number = LAYOUT_SEED): NodePosition[] {
  const vertices = [...snapshot.vertices].sort((a, b) => a.id.localeCompare(b.id));
  const random = mulberry32(seed);
  const nodes = vertices.map((v) => {
    const anchor = CLUSTER_ANCHORS[v.cluster];
    return {
      id: v.id,
      cluster: v.cluster,
      x: anchor.x + (random() - 0.5) * 160,
      y: anchor.y + (random() - 0.5) * 420,
      vx: 0,
      vy: 0,
    };
  });
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  // Only hierarchy edges act as springs; symmetric relations are drawn but
  // should not collapse the clusters together.
  const springs = snapshot.edges
    .filter((e) => e.kind === "Specialization")
    .map((e) => [index.get(e.from)!, index.get(e.to)!] as const)
    .filter(([a, b]) => a !== undefined && b !== undefined);

  for (let step = 0; step < ITERATIONS; step += 1) {
    for (let i = 0; i < nodes.length; i += 1) {
      const a = nodes[i];
      let fx = 0;
      let fy = 0;
      for (let j = 0; j < nodes.length; j += 1) {
        if (i === j) continue;
        const b = nodes[j];
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 64);
        const force = REPULSION / d2;
        const d = Math.sqrt(d2);
        fx += (dx / d) * force;
        fy += (dy / d) * force;
      }
      const anchor = CLUSTER_ANCHORS[a.cluster];
      fx += (anchor.x - a.x) * ANCHOR_PULL;
      fy += (anchor.y - a.y) * ANCHOR_PULL;
      a.vx = (a.vx + fx) * DAMPING;
      a.vy = (a.vy + fy) * DAMPING;
    }
    for (const [ai, bi] of springs) {
      const a = nodes[ai];
      const b = nodes[bi];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const stretch = (d - SPRING_LENGTH) * SPRING;
      const ux = dx / d;
      const uy = dy / d;
      a.vx += ux * stretch;
      a.vy += uy * stretch;
      b.vx -= ux * stretch;
      b.vy -= uy * stretch;
    }
    for (const node of nodes) {
      node.x = Math.min(Math.max(node.x + node.vx, 30), CANVAS.width - 30);
      node.y = Math.min(Math.max(node.y + node.vy, 24), CANVAS.height - 24);
    }
  }
  return nodes.map(({ id, cluster, x, y }) => ({
    id,
    cluster,
    x: Math.round(x * 100) / 100,
    y: Math.round(y * 100) / 100,
  }));
}
