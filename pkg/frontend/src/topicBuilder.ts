// Iterative topic builder: seed terms -> suggestions -> accept/reject loop.
// Accepted and rejected tokens are excluded from every later suggestion
// request, so nothing is ever re-suggested within a session.  Sessions are
// plain JSON (serializable and replayable) and export to the dictionary
// text format used by the service.

import { ApiClient, SuggestResult } from "./api.js";

export interface TopicBuilderSession {
  seeds: string[];
  accepted: string[];
  rejected: string[];
  suggestions: { token: string; similarity: number }[];
  unknownSeeds: string[];
  history: { action: string; token?: string }[];
}

export function newSession(seeds: string[] = []): TopicBuilderSession {
  return {
    seeds: dedupe(seeds),
    accepted: [],
    rejected: [],
    suggestions: [],
    unknownSeeds: [],
    history: seeds.length ? [{ action: "seed", token: seeds.join(",") }] : [],
  };
}

const dedupe = (tokens: string[]): string[] => [...new Set(tokens.map((t) => t.trim()).filter(Boolean))];

export function workingTerms(session: TopicBuilderSession): string[] {
  return dedupe([...session.seeds, ...session.accepted]);
}

export function exclusions(session: TopicBuilderSession): string[] {
  return dedupe([...session.accepted, ...session.rejected]);
}

export class TopicBuilder {
  session: TopicBuilderSession;
  private pending: Promise<void> = Promise.resolve();

  constructor(private client: ApiClient, seeds: string[] = [], private k = 10) {
    this.session = newSession(seeds);
  }

  /** Suggestion requests are serialized so the accept/suggest loop stays coherent. */
  private enqueue(task: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(task, task);
    return this.pending;
  }

  addSeeds(seeds: string[]): Promise<void> {
    this.session.seeds = dedupe([...this.session.seeds, ...seeds]);
    this.session.history.push({ action: "seed", token: seeds.join(",") });
    return this.refresh();
  }

  refresh(): Promise<void> {
    return this.enqueue(async () => {
      const res = await this.client.suggest(workingTerms(this.session), this.k, exclusions(this.session));
      this.applySuggestions(res.payload);
    });
  }

  private applySuggestions(result: SuggestResult): void {
    const banned = new Set([...workingTerms(this.session), ...exclusions(this.session)]);
    this.session.suggestions = result.suggestions.filter((s) => !banned.has(s.token));
    this.session.unknownSeeds = result.unknown_seeds;
  }

  accept(token: string): Promise<void> {
    if (!this.session.suggestions.some((s) => s.token === token)) {
      return this.pending; // not on offer; ignore
    }
    this.session.accepted.push(token);
    this.session.history.push({ action: "accept", token });
    return this.refresh();
  }

  reject(token: string): Promise<void> {
    if (!this.session.suggestions.some((s) => s.token === token)) {
      return this.pending;
    }
    this.session.rejected.push(token);
    this.session.history.push({ action: "reject", token });
    return this.refresh();
  }

  /** Undo the most recent accept/reject and re-query. */
  undo(): Promise<void> {
    for (let i = this.session.history.length - 1; i >= 0; i--) {
      const entry = this.session.history[i]!;
      if (entry.action === "accept" || entry.action === "reject") {
        this.session.history.splice(i, 1);
        const pool = entry.action === "accept" ? this.session.accepted : this.session.rejected;
        const at = pool.lastIndexOf(entry.token!);
        if (at >= 0) pool.splice(at, 1);
        return this.refresh();
      }
    }
    return this.pending;
  }

  /** Dictionary text format: one term per line. */
  exportDictionary(): string {
    return workingTerms(this.session).sort().join("\n") + "\n";
  }

  saveAs(name: string): Promise<void> {
    return this.enqueue(async () => {
      await this.client.putDictionary(name, workingTerms(this.session));
    });
  }

  serialize(): string {
    return JSON.stringify(this.session);
  }

  static restore(client: ApiClient, serialized: string, k = 10): TopicBuilder {
    const builder = new TopicBuilder(client, [], k);
    builder.session = JSON.parse(serialized) as TopicBuilderSession;
    return builder;
  }
}

const escapeHtml = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderBuilder(session: TopicBuilderSession): string {
  const working = workingTerms(session)
    .map((t) => `<li>${escapeHtml(t)}</li>`)
    .join("");
  const suggestions = session.suggestions
    .map(
      (s) =>
        `<li><span class="token">${escapeHtml(s.token)}</span>` +
        ` <span class="sim">${s.similarity.toFixed(3)}</span>` +
        ` <button data-accept="${escapeHtml(s.token)}">+</button>` +
        ` <button data-reject="${escapeHtml(s.token)}">x</button></li>`,
    )
    .join("");
  const unknown = session.unknownSeeds.length
    ? `<div class="unknown">not in vocabulary: ${escapeHtml(session.unknownSeeds.join(", "))}</div>`
    : "";
  return (
    `<div class="topic-builder"><h3>Working terms</h3><ul class="working">${working}</ul>` +
    `${unknown}<h3>Suggested words</h3><ul class="suggestions">${suggestions}</ul></div>`
  );
}
