/**
 * Pure text rendering for the workbench views.
 *
 * Problem and verdict text arrive from the server already in canonical
 * form; these helpers only arrange it for display. Verdict text is
 * passed through untouched so what the UI shows is byte-identical to
 * the CLI output for the same operation.
 */

import { DiagramResponse, ProblemSnapshot, SolveResponse } from "./api.js";

export interface ProblemView {
  title: string;
  whiteLines: string[];
  blackLines: string[];
  /** short id -> full set-label text, for labels too long to inline */
  legend: Map<string, string>;
  /** set when a side was collapsed to a count instead of listed */
  degraded: boolean;
}

const SET_LABEL = /^\(\(.*\)\)$/;
const LEGEND_THRESHOLD = 16;

/** Split canonical problem text into its white and black config lines. */
export function splitSections(text: string): { white: string[]; black: string[] } {
  const white: string[] = [];
  const black: string[] = [];
  let bucket: string[] | null = null;
  for (const line of text.split("\n")) {
    if (line === "white:") bucket = white;
    else if (line === "black:") bucket = black;
    else if (line.trim() !== "" && bucket) bucket.push(line);
  }
  return { white, black };
}

export function renderProblem(snap: ProblemSnapshot, maxConfigs = 200): ProblemView {
  const { white, black } = splitSections(snap.text);
  const legend = new Map<string, string>();
  const shorten = (line: string): string => {
    // long set-set labels (products of round elimination) go to the legend
    for (const label of snap.alphabet) {
      if (SET_LABEL.test(label) && label.length > LEGEND_THRESHOLD && line.includes(label)) {
        let id = "";
        for (const [k, v] of legend) if (v === label) id = k;
        if (!id) {
          id = `S${legend.size + 1}`;
          legend.set(id, label);
        }
        line = line.split(label).join(id);
      }
    }
    return line;
  };
  const degradeOrList = (lines: string[], side: string): [string[], boolean] =>
    lines.length > maxConfigs
      ? [[`(${lines.length} ${side} configurations)`], true]
      : [lines.map(shorten), false];
  const [whiteLines, dw] = degradeOrList(white, "white");
  const [blackLines, db] = degradeOrList(black, "black");
  return {
    title: `${snap.alphabet.length} labels, ${white.length} white / ${black.length} black configs`,
    whiteLines: whiteLines.length ? whiteLines : ["(empty)"],
    blackLines: blackLines.length ? blackLines : ["(empty)"],
    legend,
    degraded: dw || db,
  };
}

export interface DiagramLayout {
  /** labels grouped by layer, weakest first; deterministic ordering */
  layers: string[][];
  edges: [string, string][];
}

/**
 * Layer the strength diagram: each label sits at the length of the
 * longest chain below it. Edges come from the server's transitive
 * reduction, so chains are explicit in the edge list.
 */
export function layoutDiagram(d: DiagramResponse, alphabet: string[]): DiagramLayout {
  const below = new Map<string, string[]>();
  for (const label of alphabet) below.set(label, []);
  for (const [weak, strong] of d.edges) {
    if (!below.has(weak)) below.set(weak, []);
    if (!below.has(strong)) below.set(strong, []);
    below.get(strong)!.push(weak);
  }
  const depth = new Map<string, number>();
  const visit = (label: string, trail: Set<string>): number => {
    const known = depth.get(label);
    if (known !== undefined) return known;
    if (trail.has(label)) return 0; // defensive: server edges are acyclic
    trail.add(label);
    const preds = below.get(label) ?? [];
    const d = preds.length ? 1 + Math.max(...preds.map((p) => visit(p, trail))) : 0;
    trail.delete(label);
    depth.set(label, d);
    return d;
  };
  for (const label of below.keys()) visit(label, new Set());
  const maxDepth = Math.max(0, ...depth.values());
  const layers: string[][] = Array.from({ length: maxDepth + 1 }, () => []);
  for (const label of [...below.keys()].sort()) layers[depth.get(label)!]!.push(label);
  return { layers, edges: d.edges };
}

export function renderDiagram(layout: DiagramLayout): string {
  return layout.layers
    .map((layer, i) => `${i}: ${layer.join(" ")}`)
    .join("\n");
}

/**
 * The verdict panel shows the server text exactly as the CLI would
 * print it (trailing newline included). Any decoration would break the
 * byte-for-byte guarantee, so there is none.
 */
export function renderVerdict(res: SolveResponse): string {
  return res.text + "\n";
}
