import type { DotGraph } from "./dot.js";

export interface Point {
  x: number;
  y: number;
}

export interface Layout {
  positions: Map<string, Point>;
  width: number;
  height: number;
}

const MARGIN = 56;
const COLUMN_GAP = 176;
const ROW_GAP = 88;

/**
 * Deterministic layered drawing: breadth-first layers from the initial
 * state, one median-of-predecessors ordering pass per layer to cut
 * crossings, ties broken by state id. No randomness anywhere, so the same
 * graph always lands on the same pixels and screenshots stay comparable.
 * The layout is computed once per session; later fetches only restyle.
 */
export function layeredLayout(graph: DotGraph): Layout {
  const successors = new Map<string, string[]>();
  for (const node of graph.nodes) successors.set(node.id, []);
  for (const edge of graph.edges) successors.get(edge.from)?.push(edge.to);

  const root = graph.initial ?? graph.nodes[0]?.id;
  const layerOf = new Map<string, number>();
  if (root !== undefined) {
    layerOf.set(root, 0);
    let frontier = [root];
    while (frontier.length > 0) {
      const next: string[] = [];
      for (const id of frontier) {
        for (const succ of successors.get(id) ?? []) {
          if (!layerOf.has(succ)) {
            layerOf.set(succ, (layerOf.get(id) ?? 0) + 1);
            next.push(succ);
          }
        }
      }
      frontier = next;
    }
  }

  // Anything unreachable (the service never sends such arenas, but a hand
  // written document might) is parked in one extra column on the right.
  const reachedDepth = Math.max(0, ...layerOf.values());
  const strays = graph.nodes.filter((node) => !layerOf.has(node.id)).map((n) => n.id);
  for (const id of strays.sort()) layerOf.set(id, reachedDepth + 1);

  const layers: string[][] = [];
  for (const [id, depth] of layerOf) {
    (layers[depth] ??= []).push(id);
  }

  const predecessors = new Map<string, string[]>();
  for (const edge of graph.edges) {
    const list = predecessors.get(edge.to);
    if (list === undefined) predecessors.set(edge.to, [edge.from]);
    else list.push(edge.from);
  }

  let previous: string[] = [];
  for (const layer of layers) {
    if (layer === undefined) continue;
    layer.sort();
    if (previous.length > 0) {
      const rank = new Map(previous.map((id, index) => [id, index]));
      const median = (id: string): number => {
        const ranks = (predecessors.get(id) ?? [])
          .map((pred) => rank.get(pred))
          .filter((value): value is number => value !== undefined)
          .sort((a, b) => a - b);
        const mid = ranks[Math.floor(ranks.length / 2)];
        return mid === undefined ? Number.MAX_SAFE_INTEGER : mid;
      };
      layer.sort((a, b) => median(a) - median(b) || (a < b ? -1 : 1));
    }
    previous = layer;
  }

  const tallest = Math.max(1, ...layers.map((layer) => layer?.length ?? 0));
  const positions = new Map<string, Point>();
  layers.forEach((layer, depth) => {
    if (layer === undefined) return;
    const offset = ((tallest - layer.length) * ROW_GAP) / 2;
    layer.forEach((id, index) => {
      positions.set(id, {
        x: MARGIN + depth * COLUMN_GAP,
        y: MARGIN + offset + index * ROW_GAP,
      });
    });
  });

  return {
    positions,
    width: MARGIN * 2 + Math.max(0, layers.length - 1) * COLUMN_GAP,
    height: MARGIN * 2 + (tallest - 1) * ROW_GAP,
  };
}
