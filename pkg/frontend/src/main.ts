// Browser bootstrap: wires the state machines to the DOM.  All analytics
// come from the API; this file only routes events and injects rendered HTML.

import { ApiClient } from "./api.js";
import { decodeFilterState, emptyFilterState, encodeFilterState } from "./filters.js";
import { renderResults, SearchView } from "./search.js";
import { renderBuilder, TopicBuilder } from "./topicBuilder.js";
import { extractionChart, indicatorChart, termFrequencyChart } from "./charts.js";

const client = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function bootSearch(): Promise<void> {
  const initial = location.hash.startsWith("#f=")
    ? decodeFilterState(location.hash.slice(3))
    : emptyFilterState;
  const results = el<HTMLDivElement>("results");
  const view = new SearchView(client, initial, (state) => {
    results.innerHTML = renderResults(state);
    location.hash = "#f=" + encodeFilterState(state.filter);
    el<HTMLSpanElement>("snapshot").textContent = state.snapshot ? `snapshot v${state.snapshot}` : "";
  });
  el<HTMLInputElement>("keywords").addEventListener("input", (e) => {
    view.edit({ keywords: (e.target as HTMLInputElement).value });
  });
  el<HTMLInputElement>("industries").addEventListener("input", (e) => {
    view.edit({ industries: (e.target as HTMLInputElement).value });
  });
  el<HTMLInputElement>("regions").addEventListener("input", (e) => {
    view.edit({ regions: (e.target as HTMLInputElement).value.split(",").map((s) => s.trim()).filter(Boolean) });
  });
  results.addEventListener("click", (e) => {
    const cursor = (e.target as HTMLElement).dataset?.["cursor"];
    if (cursor) void view.run(cursor);
  });
  await view.run();
}

async function bootBuilder(): Promise<void> {
  const container = el<HTMLDivElement>("builder");
  let builder = new TopicBuilder(client);
  const paint = () => {
    container.innerHTML = renderBuilder(builder.session);
  };
  el<HTMLButtonElement>("seed-go").addEventListener("click", async () => {
    const seeds = el<HTMLInputElement>("seed-input").value.split(",").map((s) => s.trim()).filter(Boolean);
    builder = new TopicBuilder(client, []);
    await builder.addSeeds(seeds);
    paint();
  });
  container.addEventListener("click", async (e) => {
    const target = e.target as HTMLElement;
    const accept = target.dataset?.["accept"];
    const reject = target.dataset?.["reject"];
    if (accept) await builder.accept(accept);
    if (reject) await builder.reject(reject);
    if (accept || reject) paint();
  });
  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const blob = new Blob([builder.exportDictionary()], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "topic-dictionary.txt";
    link.click();
  });
}

async function bootCharts(): Promise<void> {
  const charts = el<HTMLDivElement>("charts");
  const standardize = el<HTMLInputElement>("standardize-toggle");
  const henderson = el<HTMLInputElement>("henderson-toggle");

  async function paint(): Promise<void> {
    const blocks: string[] = [];
    const tf = await client.termFrequency(["supply", "shipping", "delays"]);
    blocks.push(termFrequencyChart(tf.payload));
    const exposure = await client.topicExposure("wages", { standardized: standardize.checked });
    blocks.push(indicatorChart(exposure.payload));
    const tone = await client.topicTone("wages", { standardized: standardize.checked });
    blocks.push(indicatorChart(tone.payload));
    const unc = await client.uncertainty({ henderson: henderson.checked });
    blocks.push(indicatorChart(unc.payload));
    const wages = await client.extractions("wages");
    blocks.push(extractionChart(wages.payload));
    charts.innerHTML = blocks.join("\n");
  }

  standardize.addEventListener("change", () => void paint());
  henderson.addEventListener("change", () => void paint());
  await paint();
}

window.addEventListener("DOMContentLoaded", () => {
  void bootSearch();
  void bootBuilder();
  void bootCharts();
});
