// Parser for the Graphviz text the advice service exports. The service
// writes one statement per line and a fixed vocabulary of attributes, so a
// line tokenizer is enough; this is not a general DOT reader.
//
// Drawing conventions decoded here:
//   shape=box / shape=circle        protagonist / adversary state
//   style=filled + fillcolor        unsafe state
//   penwidth on a node              losing-set border
//   peripheries=2                   current state of the session
//   xlabel="init"                   initial state
//   style=dashed on an edge         forbidden by the adviser in force
//   penwidth on an edge             protagonist strategy choice

export interface DotNode {
  id: string;
  owner: "protagonist" | "adversary";
  unsafe: boolean;
  losing: boolean;
  current: boolean;
  initial: boolean;
}

export interface DotEdge {
  from: string;
  to: string;
  label: string;
  forbidden: boolean;
  strategy: boolean;
}

export interface DotGraph {
  nodes: DotNode[];
  edges: DotEdge[];
  initial: string | null;
  current: string | null;
}

export class DotParseError extends Error {
  constructor(message: string, readonly line: number) {
    super(`line ${line}: ${message}`);
    this.name = "DotParseError";
  }
}

type Token =
  | { kind: "str"; value: string }
  | { kind: "word"; value: string }
  | { kind: "punct"; value: string };

const PUNCT = new Set(["[", "]", ";", "=", "{", "}"]);

function tokenize(text: string, lineNo: number): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i] as string;
    if (ch === " " || ch === "\t") {
      i += 1;
    } else if (ch === '"') {
      let value = "";
      i += 1;
      for (;;) {
        if (i >= text.length) throw new DotParseError("unterminated string", lineNo);
        const c = text[i] as string;
        if (c === "\\") {
          if (i + 1 >= text.length) throw new DotParseError("dangling escape", lineNo);
          value += text[i + 1];
          i += 2;
        } else if (c === '"') {
          i += 1;
          break;
        } else {
          value += c;
          i += 1;
        }
      }
      tokens.push({ kind: "str", value });
    } else if (ch === "-" && text[i + 1] === ">") {
      tokens.push({ kind: "punct", value: "->" });
      i += 2;
    } else if (PUNCT.has(ch)) {
      tokens.push({ kind: "punct", value: ch });
      i += 1;
    } else {
      let value = "";
      while (i < text.length) {
        const c = text[i] as string;
        if (c === " " || c === "\t" || c === '"' || PUNCT.has(c)) break;
        if (c === "-" && text[i + 1] === ">") break;
        value += c;
        i += 1;
      }
      tokens.push({ kind: "word", value });
    }
  }
  return tokens;
}

function isName(token: Token | undefined): token is Token {
  return token !== undefined && (token.kind === "str" || token.kind === "word");
}

function parseAttrs(tokens: Token[], start: number, lineNo: number): Map<string, string> {
  const attrs = new Map<string, string>();
  let i = start;
  const open = tokens[i];
  if (open === undefined || open.value !== "[") {
    throw new DotParseError("expected an attribute block", lineNo);
  }
  i += 1;
  while (i < tokens.length && tokens[i]?.value !== "]") {
    const key = tokens[i];
    const eq = tokens[i + 1];
    const value = tokens[i + 2];
    if (!isName(key) || eq?.value !== "=" || !isName(value)) {
      throw new DotParseError("expected key=value inside the attribute block", lineNo);
    }
    attrs.set(key.value, value.value);
    i += 3;
  }
  if (tokens[i]?.value !== "]") throw new DotParseError("unclosed attribute block", lineNo);
  return attrs;
}

export function parseDot(text: string): DotGraph {
  const nodes: DotNode[] = [];
  const edges: DotEdge[] = [];
  const seen = new Set<string>();
  let opened = false;

  const lines = text.split("\n");
  for (let lineNo = 1; lineNo <= lines.length; lineNo += 1) {
    const line = (lines[lineNo - 1] ?? "").trim();
    if (line === "") continue;
    if (line.startsWith("digraph")) {
      opened = true;
      continue;
    }
    if (line === "}") continue;

    const tokens = tokenize(line, lineNo);
    const head = tokens[0];
    if (head === undefined) continue;
    if (head.kind === "word" && (head.value.startsWith("rankdir") || head.value === "rankdir")) {
      continue;
    }
    if (head.kind === "word" && ["node", "edge", "graph"].includes(head.value)) {
      continue; // attribute defaults apply to rendering, not structure
    }
    if (!isName(head)) throw new DotParseError("statement must start with a name", lineNo);

    if (tokens[1]?.value === "->") {
      const target = tokens[2];
      if (!isName(target)) throw new DotParseError("edge is missing its target", lineNo);
      const attrs = parseAttrs(tokens, 3, lineNo);
      const label = attrs.get("label");
      if (label === undefined) throw new DotParseError("edge is missing a label", lineNo);
      edges.push({
        from: head.value,
        to: target.value,
        label,
        forbidden: attrs.get("style") === "dashed",
        strategy: attrs.has("penwidth"),
      });
    } else {
      const attrs = parseAttrs(tokens, 1, lineNo);
      if (seen.has(head.value)) {
        throw new DotParseError(`duplicate node ${head.value}`, lineNo);
      }
      seen.add(head.value);
      nodes.push({
        id: head.value,
        owner: attrs.get("shape") === "box" ? "protagonist" : "adversary",
        unsafe: attrs.has("fillcolor"),
        losing: attrs.has("penwidth"),
        current: attrs.get("peripheries") === "2",
        initial: attrs.get("xlabel") === "init",
      });
    }
  }

  if (!opened) throw new DotParseError("not a digraph document", 1);
  for (const edge of edges) {
    if (!seen.has(edge.from) || !seen.has(edge.to)) {
      throw new DotParseError(`edge ${edge.from} -> ${edge.to} references an unknown node`, 1);
    }
  }
  const initial = nodes.find((node) => node.initial)?.id ?? null;
  const current = nodes.find((node) => node.current)?.id ?? null;
  return { nodes, edges, initial, current };
}
