// Search view: debounced filter edits -> /search calls -> rendered snippet
// list with keyword highlighting from the server-provided match offsets.
// All rendering is string-based so the logic is testable without a DOM.

import { ApiClient, ApiError, SearchPage, Snippet } from "./api.js";
import { FilterState, toApiFilter, validateKeywordExpression } from "./filters.js";

export interface SearchViewState {
  filter: FilterState;
  page: SearchPage | null;
  snapshot: number;
  error: string | null;       // API failures keep the previous results
  validation: string | null;  // inline keyword-expression problem
  loading: boolean;
}

export class SearchView {
  state: SearchViewState;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private generation = 0;

  constructor(
    private client: ApiClient,
    filter: FilterState,
    private onChange: (state: SearchViewState) => void = () => {},
    private debounceMs = 250,
  ) {
    this.state = {
      filter,
      page: null,
      snapshot: 0,
      error: null,
      validation: null,
      loading: false,
    };
  }

  /** Apply a filter edit; invalid keyword expressions never hit the API. */
  edit(patch: Partial<FilterState>): void {
    this.state.filter = { ...this.state.filter, ...patch };
    const check = validateKeywordExpression(this.state.filter.keywords);
    if (!check.ok) {
      this.state.validation = check.error;
      this.onChange(this.state);
      return;
    }
    this.state.validation = null;
    if (this.timer) clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.run(), this.debounceMs);
    this.onChange(this.state);
  }

  /** Execute the current filter immediately (used by tests and pagination). */
  async run(cursor: string | null = null, pageSize = 25): Promise<SearchViewState> {
    const gen = ++this.generation;
    this.state.loading = true;
    this.onChange(this.state);
    try {
      const envelope = await this.client.search(toApiFilter(this.state.filter), pageSize, cursor);
      if (gen === this.generation) {
        this.state.page = envelope.payload;
        this.state.snapshot = envelope.snapshot;
        this.state.error = null;
      }
    } catch (err) {
      if (gen === this.generation) {
        this.state.error = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      }
    } finally {
      if (gen === this.generation) {
        this.state.loading = false;
        this.onChange(this.state);
      }
    }
    return this.state;
  }
}

const escapeHtml = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

/** Wrap the server-reported match offsets in <mark> tags. */
export function highlight(text: string, offsets: [number, number][]): string {
  if (!offsets.length) return escapeHtml(text);
  const sorted = [...offsets].sort((a, b) => a[0] - b[0]);
  let html = "";
  let pos = 0;
  for (const [start, end] of sorted) {
    if (start < pos) continue; // overlapping spans collapse into the first
    html += escapeHtml(text.slice(pos, start));
    html += `<mark>${escapeHtml(text.slice(start, end))}</mark>`;
    pos = end;
  }
  return html + escapeHtml(text.slice(pos));
}

export function renderSnippet(snippet: Snippet): string {
  const meta = [
    snippet.meeting_date,
    snippet.firm_id,
    `SIC ${snippet.industry_code}`,
    snippet.region,
    snippet.headcount_bucket,
  ].join(" · ");
  const heading = snippet.heading_context
    ? `<span class="heading-context">${escapeHtml(snippet.heading_context)}</span>`
    : "";
  return (
    `<article class="snippet" data-paragraph="${escapeHtml(snippet.paragraph_id)}">` +
    `<header>${escapeHtml(meta)} ${heading}</header>` +
    `<p>${highlight(snippet.text, snippet.match_offsets)}</p>` +
    `</article>`
  );
}

export function renderResults(state: SearchViewState): string {
  if (state.validation) {
    return `<div class="invalid">keyword expression: ${escapeHtml(state.validation)}</div>`;
  }
  const banner = state.error
    ? `<div class="error">${escapeHtml(state.error)} (showing previous results)</div>`
    : "";
  if (!state.page) return banner || `<div class="empty">no search yet</div>`;
  const items = state.page.items.map(renderSnippet).join("\n");
  const footer =
    `<footer>${state.page.total} matches · snapshot v${state.snapshot}` +
    (state.page.next_cursor ? ` · <button data-cursor="${state.page.next_cursor}">more</button>` : "") +
    `</footer>`;
  return `${banner}<section class="results">${items}</section>${footer}`;
}
