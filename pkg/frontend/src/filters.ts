// Search-panel filter state and its lossless mapping to the API filter,
// plus client-side validation of the compact keyword expression so malformed
// input never leaves the browser.

import type { ApiFilter } from "./api.js";

export interface FilterState {
  keywords: string;
  industries: string;   // comma-separated prefixes, as typed
  regions: string[];
  dateStart: string;    // ISO date or ""
  dateEnd: string;
  topic: string;        // "" = off
  topicMinProbability: number;
}

export const emptyFilterState: FilterState = {
  keywords: "",
  industries: "",
  regions: [],
  dateStart: "",
  dateEnd: "",
  topic: "",
  topicMinProbability: 0.9,
};

export type Validation = { ok: true } | { ok: false; error: string };

// Mirrors the server grammar: TERM | ANY(expr, ...) | ALL(expr, ...),
// terms bare or double-quoted (phrases).
export function validateKeywordExpression(text: string): Validation {
  const trimmed = text.trim();
  if (!trimmed) return { ok: true }; // empty means "no keyword clause"
  const tokens = lex(trimmed);
  if (typeof tokens === "string") return { ok: false, error: tokens };
  let pos = 0;

  function parseNode(): string | null {
    const tok = tokens[pos++];
    if (tok === undefined) return "unexpected end of expression";
    const upper = tok.toUpperCase();
    if (upper === "ANY" || upper === "ALL") {
      if (tokens[pos++] !== "(") return `expected '(' after ${upper}`;
      let err = parseNode();
      if (err) return err;
      while (tokens[pos] === ",") {
        pos++;
        err = parseNode();
        if (err) return err;
      }
      if (tokens[pos++] !== ")") return `expected ')' closing ${upper}(...)`;
      return null;
    }
    if (tok === "(" || tok === ")" || tok === ",") return `unexpected '${tok}'`;
    const bare = tok.startsWith('"') ? tok.slice(1, -1) : tok;
    if (!/[\p{L}\p{N}]/u.test(bare)) return `term '${bare}' has no letters or digits`;
    return null;
  }

  const err = parseNode();
  if (err) return { ok: false, error: err };
  if (pos !== tokens.length) return { ok: false, error: "trailing input after expression" };
  return { ok: true };
}

function lex(text: string): string[] | string {
  const tokens: string[] = [];
  const re = /\s*("[^"]*"|\(|\)|,|[^\s(),"]+)/gy;
  let match: RegExpExecArray | null;
  let last = 0;
  while ((match = re.exec(text)) !== null) {
    tokens.push(match[1]!);
    last = re.lastIndex;
  }
  if (last < text.trim().length && text.slice(last).trim()) {
    return `cannot read expression near '${text.slice(last, last + 8)}'`;
  }
  if (tokens.length === 0) return "empty expression";
  return tokens;
}

export function toApiFilter(state: FilterState): ApiFilter {
  const filter: ApiFilter = {};
  if (state.keywords.trim()) filter.keywords = state.keywords.trim();
  const industries = state.industries
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean);
  if (industries.length) filter.industries = industries;
  if (state.regions.length) filter.regions = [...state.regions];
  if (state.dateStart && state.dateEnd) filter.date_range = [state.dateStart, state.dateEnd];
  if (state.topic) {
    filter.topics = [{ topic: state.topic, min_probability: state.topicMinProbability }];
  }
  return filter;
}

export function fromApiFilter(filter: ApiFilter): FilterState {
  return {
    keywords: typeof filter.keywords === "string" ? filter.keywords : "",
    industries: (filter.industries ?? []).join(", "),
    regions: [...(filter.regions ?? [])],
    dateStart: filter.date_range?.[0] ?? "",
    dateEnd: filter.date_range?.[1] ?? "",
    topic: filter.topics?.[0]?.topic ?? "",
    topicMinProbability: filter.topics?.[0]?.min_probability ?? 0.9,
  };
}

// URL-encodable form for shareable analyst views.
export function encodeFilterState(state: FilterState): string {
  return new URLSearchParams(
    Object.entries({
      kw: state.keywords,
      ind: state.industries,
      reg: state.regions.join(","),
      from: state.dateStart,
      to: state.dateEnd,
      topic: state.topic,
      p: state.topic ? String(state.topicMinProbability) : "",
    }).filter(([, v]) => v !== ""),
  ).toString();
}

export function decodeFilterState(query: string): FilterState {
  const params = new URLSearchParams(query);
  return {
    keywords: params.get("kw") ?? "",
    industries: params.get("ind") ?? "",
    regions: (params.get("reg") ?? "").split(",").filter(Boolean),
    dateStart: params.get("from") ?? "",
    dateEnd: params.get("to") ?? "",
    topic: params.get("topic") ?? "",
    topicMinProbability: Number(params.get("p") ?? "0.9"),
  };
}
