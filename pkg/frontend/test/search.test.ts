import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { emptyFilterState } from "../src/filters.js";
import { highlight, renderResults, renderSnippet, SearchView } from "../src/search.js";

function fakeResponse(payload: unknown, snapshot = 3): Response {
  const body = { request_id: "r1", snapshot, payload, error: null };
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

const page = {
  items: [
    {
      paragraph_id: "L000001:p0000",
      liaison_id: "L000001",
      meeting_date: "2021-02-10",
      firm_id: "F0001",
      industry_code: "4100",
      region: "NSW",
      headcount_bucket: "medium",
      heading_context: "Costs",
      text: "Costs rose sharply over the year.",
      match_offsets: [[0, 5]] as [number, number][],
      topic_scores: {},
      tone: null,
    },
  ],
  total: 1,
  next_cursor: null,
};

describe("SearchView", () => {
  it("runs the filter and stores page + snapshot", async () => {
    const fetchImpl = vi.fn(async () => fakeResponse(page));
    const view = new SearchView(new ApiClient("", fetchImpl), emptyFilterState);
    const state = await view.run();
    expect(fetchImpl).toHaveBeenCalledOnce();
    expect(state.page?.total).toBe(1);
    expect(state.snapshot).toBe(3);
  });

  it("never calls the API for a malformed keyword expression", () => {
    const fetchImpl = vi.fn(async () => fakeResponse(page));
    const view = new SearchView(new ApiClient("", fetchImpl), emptyFilterState, () => {}, 0);
    view.edit({ keywords: "ANY(" });
    expect(view.state.validation).toBeTruthy();
    expect(fetchImpl).not.toHaveBeenCalled();
  });

  it("keeps previous results when the API fails", async () => {
    let calls = 0;
    const fetchImpl = vi.fn(async () => {
      calls += 1;
      if (calls === 1) return fakeResponse(page);
      return new Response(
        JSON.stringify({
          request_id: "r2",
          snapshot: 3,
          payload: null,
          error: { code: "store_error", message: "boom" },
        }),
        { status: 404 },
      );
    });
    const view = new SearchView(new ApiClient("", fetchImpl), emptyFilterState);
    await view.run();
    await view.run();
    expect(view.state.error).toContain("store_error");
    expect(view.state.page?.total).toBe(1); // previous results preserved
  });

  it("debounces edits into a single request", async () => {
    const fetchImpl = vi.fn(async () => fakeResponse(page));
    const view = new SearchView(new ApiClient("", fetchImpl), emptyFilterState, () => {}, 5);
    view.edit({ keywords: "cost" });
    view.edit({ keywords: "costs" });
    view.edit({ keywords: "ANY(cost, costs)" });
    await new Promise((resolve) => setTimeout(resolve, 40));
    expect(fetchImpl).toHaveBeenCalledTimes(1);
  });
});

describe("rendering", () => {
  it("highlights server offsets only", () => {
    const html = highlight("Costs rose; costs fell.", [
      [0, 5],
      [12, 17],
    ]);
    expect(html).toBe("<mark>Costs</mark> rose; <mark>costs</mark> fell.");
  });

  it("escapes html in text and keeps offsets aligned", () => {
    const html = highlight("a <b> cost", [[6, 10]]);
    expect(html).toBe("a &lt;b&gt; <mark>cost</mark>");
  });

  it("renders firm metadata per row", () => {
    const html = renderSnippet(page.items[0]!);
    for (const chunk of ["2021-02-10", "F0001", "SIC 4100", "NSW", "medium", "Costs"]) {
      expect(html).toContain(chunk);
    }
  });

  it("renders validation failures inline", () => {
    const html = renderResults({
      filter: emptyFilterState,
      page: null,
      snapshot: 0,
      error: null,
      validation: "expected ')'",
      loading: false,
    });
    expect(html).toContain("keyword expression");
  });
});
