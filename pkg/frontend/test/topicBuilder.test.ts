import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { exclusions, renderBuilder, TopicBuilder, workingTerms } from "../src/topicBuilder.js";

const VOCAB = ["workforce", "skilled", "tradespeople", "unskilled", "employees", "skills"];

/** Fake suggest endpoint: returns vocabulary minus exclusions, in order. */
function fakeClient(): { client: ApiClient; calls: { terms: string[]; exclude: string[] }[] } {
  const calls: { terms: string[]; exclude: string[] }[] = [];
  const fetchImpl = vi.fn(async (url: string, init?: RequestInit) => {
    const body = JSON.parse(String(init?.body)) as { terms: string[]; k: number; exclude: string[] };
    calls.push({ terms: body.terms, exclude: body.exclude });
    const banned = new Set([...body.terms, ...body.exclude]);
    const suggestions = VOCAB.filter((t) => !banned.has(t))
      .slice(0, body.k)
      .map((token, i) => ({ token, similarity: 0.9 - i * 0.05 }));
    return new Response(
      JSON.stringify({
        request_id: "r",
        snapshot: 1,
        payload: { suggestions, unknown_seeds: body.terms.filter((t) => t.startsWith("zz")) },
        error: null,
      }),
      { status: 200 },
    );
  });
  return { client: new ApiClient("", fetchImpl), calls };
}

describe("TopicBuilder", () => {
  it("accepting a term refreshes and never re-suggests it", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, [], 10);
    await builder.addSeeds(["labour", "workers"]);
    expect(builder.session.suggestions.map((s) => s.token)).toContain("workforce");
    await builder.accept("workforce");
    expect(workingTerms(builder.session)).toContain("workforce");
    expect(builder.session.suggestions.map((s) => s.token)).not.toContain("workforce");
    await builder.accept(builder.session.suggestions[0]!.token);
    const tokens = builder.session.suggestions.map((s) => s.token);
    for (const accepted of builder.session.accepted) {
      expect(tokens).not.toContain(accepted);
    }
  });

  it("rejected terms are excluded from later requests", async () => {
    const { client, calls } = fakeClient();
    const builder = new TopicBuilder(client, ["labour"], 10);
    await builder.refresh();
    await builder.reject("skills");
    const last = calls[calls.length - 1]!;
    expect(last.exclude).toContain("skills");
    expect(builder.session.suggestions.map((s) => s.token)).not.toContain("skills");
  });

  it("undo removes the last accept and re-queries", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, ["labour"], 10);
    await builder.refresh();
    await builder.accept("workforce");
    await builder.undo();
    expect(builder.session.accepted).not.toContain("workforce");
    expect(builder.session.suggestions.map((s) => s.token)).toContain("workforce");
  });

  it("unknown seeds are reported, not fatal", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, [], 10);
    await builder.addSeeds(["labour", "zzmystery"]);
    expect(builder.session.unknownSeeds).toEqual(["zzmystery"]);
    expect(builder.session.suggestions.length).toBeGreaterThan(0);
  });

  it("export produces the dictionary text format", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, ["labour"], 10);
    await builder.refresh();
    await builder.accept("workforce");
    const text = builder.exportDictionary();
    expect(text.endsWith("\n")).toBe(true);
    expect(text.split("\n").filter(Boolean).sort()).toEqual(["labour", "workforce"]);
  });

  it("sessions serialize and replay", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, ["labour"], 10);
    await builder.refresh();
    await builder.accept("workforce");
    const restored = TopicBuilder.restore(client, builder.serialize(), 10);
    expect(restored.session).toEqual(builder.session);
    expect(exclusions(restored.session)).toContain("workforce");
  });

  it("renders working terms and suggestion buttons", async () => {
    const { client } = fakeClient();
    const builder = new TopicBuilder(client, ["labour"], 3);
    await builder.refresh();
    const html = renderBuilder(builder.session);
    expect(html).toContain("<li>labour</li>");
    expect(html).toContain('data-accept="workforce"');
  });
});
