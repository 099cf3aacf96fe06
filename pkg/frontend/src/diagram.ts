/** Node-link rendering of a query graph.
 *
 * Deterministic layered layout: breadth-first from the target node, one
 * column per depth, nodes stacked within a column in payload order. Node
 * kind is encoded as shape and color class; each edge is labeled with its
 * top predicate candidate.
 */

import type { GraphEdgePayload, GraphPayload } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const COLUMN_GAP = 190;
const ROW_GAP = 100;
const MARGIN_X = 90;
const MARGIN_Y = 70;

export interface PlacedNode {
  id: string;
  depth: number;
  x: number;
  y: number;
}

/** Depths via breadth-first search from the target; nodes unreachable from
 * it land in one extra column so nothing silently disappears. */
export function layoutGraph(graph: GraphPayload): PlacedNode[] {
  const neighbors = new Map<string, string[]>();
  for (const node of graph.nodes) {
    neighbors.set(node.id, []);
  }
  for (const edge of graph.edges) {
    const [a, b] = edge.nodes;
    neighbors.get(a)?.push(b);
    neighbors.get(b)?.push(a);
  }
  const depths = new Map<string, number>();
  const queue: string[] = [];
  if (neighbors.has(graph.target)) {
    depths.set(graph.target, 0);
    queue.push(graph.target);
  }
  while (queue.length) {
    const current = queue.shift()!;
    for (const next of neighbors.get(current) ?? []) {
      if (!depths.has(next)) {
        depths.set(next, depths.get(current)! + 1);
        queue.push(next);
      }
    }
  }
  const maxDepth = depths.size ? Math.max(...depths.values()) : 0;
  const rowWithin = new Map<number, number>();
  return graph.nodes.map((node) => {
    const depth = depths.get(node.id) ?? maxDepth + 1;
    const row = rowWithin.get(depth) ?? 0;
    rowWithin.set(depth, row + 1);
    return {
      id: node.id,
      depth,
      x: MARGIN_X + depth * COLUMN_GAP,
      y: MARGIN_Y + row * ROW_GAP,
    };
  });
}

export function topPredicate(edge: GraphEdgePayload): string {
  return edge.candidates.length ? edge.candidates[0].predicate : "?";
}

function shapeFor(
  doc: Document,
  kind: string,
  x: number,
  y: number,
): SVGElement {
  const lower = kind.toLowerCase();
  let shape: SVGElement;
  switch (lower) {
    case "entity": {
      shape = doc.createElementNS(SVG_NS, "rect");
      shape.setAttribute("x", String(x - 40));
      shape.setAttribute("y", String(y - 22));
      shape.setAttribute("width", "80");
      shape.setAttribute("height", "44");
      break;
    }
    case "type": {
      shape = doc.createElementNS(SVG_NS, "rect");
      shape.setAttribute("x", String(x - 40));
      shape.setAttribute("y", String(y - 22));
      shape.setAttribute("width", "80");
      shape.setAttribute("height", "44");
      shape.setAttribute("rx", "18");
      break;
    }
    case "literal": {
      shape = doc.createElementNS(SVG_NS, "polygon");
      const points = [
        `${x},${y - 26}`,
        `${x + 42},${y}`,
        `${x},${y + 26}`,
        `${x - 42},${y}`,
      ];
      shape.setAttribute("points", points.join(" "));
      break;
    }
    default: {
      // variables (and anything unexpected) draw as circles
      shape = doc.createElementNS(SVG_NS, "circle");
      shape.setAttribute("cx", String(x));
      shape.setAttribute("cy", String(y));
      shape.setAttribute("r", "26");
    }
  }
  shape.setAttribute("class", `node-shape node-${lower}`);
  return shape;
}

export function renderDiagram(
  graph: GraphPayload,
  doc: Document = document,
): SVGSVGElement {
  const placed = layoutGraph(graph);
  const at = new Map(placed.map((p) => [p.id, p]));
  const width = Math.max(...placed.map((p) => p.x), MARGIN_X) + 110;
  const height = Math.max(...placed.map((p) => p.y), MARGIN_Y) + 80;

  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("class", "graph-diagram");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", "query graph");

  for (const edge of graph.edges) {
    const a = at.get(edge.nodes[0]);
    const b = at.get(edge.nodes[1]);
    if (!a || !b) {
      continue;
    }
    const group = doc.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "edge");
    group.setAttribute("data-edge-id", edge.id);
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "edge-label");
    label.setAttribute("x", String((a.x + b.x) / 2));
    label.setAttribute("y", String((a.y + b.y) / 2 - 8));
    label.setAttribute("text-anchor", "middle");
    label.textContent = topPredicate(edge);
    group.append(line, label);
    svg.append(group);
  }

  for (const node of graph.nodes) {
    const position = at.get(node.id)!;
    const group = doc.createElementNS(SVG_NS, "g");
    group.setAttribute(
      "class",
      node.id === graph.target ? "node node-target" : "node",
    );
    group.setAttribute("data-node-id", node.id);
    group.setAttribute("data-kind", node.kind);
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "node-label");
    label.setAttribute("x", String(position.x));
    label.setAttribute("y", String(position.y + 5));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.surface;
    group.append(shapeFor(doc, node.kind, position.x, position.y), label);
    svg.append(group);
  }
  return svg;
}
