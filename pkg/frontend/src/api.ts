// Typed client for the liaisonkit HTTP API.
// Every JSON response arrives in an envelope carrying the snapshot version;
// the UI surfaces that version so analyst citations are reproducible.

export interface Envelope<T> {
  request_id: string;
  snapshot: number;
  payload: T;
  error?: { code: string; message: string } | null;
}

export interface ApiFilter {
  date_range?: [string, string] | null;
  industries?: string[];
  regions?: string[];
  keywords?: string | null;
  topics?: { topic: string; min_probability: number }[];
  staff_scores?: { name: string; min: number; max: number }[];
}

export interface Snippet {
  paragraph_id: string;
  liaison_id: string;
  meeting_date: string;
  firm_id: string;
  industry_code: string;
  region: string;
  headcount_bucket: string;
  heading_context: string;
  text: string;
  match_offsets: [number, number][];
  topic_scores: Record<string, number>;
  tone: number | null;
}

export interface SearchPage {
  items: Snippet[];
  total: number;
  next_cursor: string | null;
}

export interface SeriesPoint {
  period: string;
  value: number;
  n_liaisons: number;
}

export interface IndicatorSeries {
  name: string;
  granularity: string;
  standardized: boolean;
  points: SeriesPoint[];
}

export interface TermFrequencySeries {
  terms: string[];
  granularity: string;
  points: { period: string; matched: number; total: number; share: number }[];
}

export interface ExtractionSeries {
  variable: string;
  granularity: string;
  trim: [number, number];
  points: { period: string; mean: number; n_firms: number }[];
}

export interface SuggestResult {
  suggestions: { token: string; similarity: number }[];
  unknown_seeds: string[];
}

export class ApiError extends Error {
  constructor(public code: string, message: string) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  lastSnapshot = 0;

  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    private token: string | null = null,
  ) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async unwrap<T>(res: Response): Promise<Envelope<T>> {
    const body = (await res.json()) as Envelope<T>;
    if (!res.ok || body.error) {
      const err = body.error ?? { code: `http_${res.status}`, message: res.statusText };
      throw new ApiError(err.code, err.message);
    }
    this.lastSnapshot = body.snapshot;
    return body;
  }

  private async get<T>(path: string, params?: Record<string, string>): Promise<Envelope<T>> {
    const query = params ? `?${new URLSearchParams(params)}` : "";
    const res = await this.fetchImpl(`${this.baseUrl}${path}${query}`, {
      headers: this.headers(false),
    });
    return this.unwrap<T>(res);
  }

  private async send<T>(method: string, path: string, body: unknown): Promise<Envelope<T>> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(true),
      body: JSON.stringify(body),
    });
    return this.unwrap<T>(res);
  }

  health() {
    return this.get<{ status: string; snapshot: number }>("/health");
  }

  search(filter: ApiFilter, pageSize = 25, cursor: string | null = null) {
    const body: Record<string, unknown> = { filter, page_size: pageSize };
    if (cursor) body["cursor"] = cursor;
    return this.send<SearchPage>("POST", "/search", body);
  }

  termFrequency(terms: string[], granularity = "quarter") {
    return this.get<TermFrequencySeries>("/series/term-frequency", {
      terms: terms.join(","),
      granularity,
    });
  }

  topicExposure(topic: string, opts: { method?: string; standardized?: boolean; granularity?: string } = {}) {
    return this.get<IndicatorSeries>("/series/topic-exposure", {
      topic,
      method: opts.method ?? "scored",
      standardized: String(opts.standardized ?? false),
      granularity: opts.granularity ?? "quarter",
    });
  }

  topicTone(topic: string, opts: { method?: string; standardized?: boolean; granularity?: string } = {}) {
    return this.get<IndicatorSeries>("/series/topic-tone", {
      topic,
      method: opts.method ?? "scored",
      standardized: String(opts.standardized ?? false),
      granularity: opts.granularity ?? "quarter",
    });
  }

  uncertainty(opts: { henderson?: boolean; granularity?: string } = {}) {
    return this.get<IndicatorSeries>("/series/uncertainty", {
      henderson: String(opts.henderson ?? false),
      granularity: opts.granularity ?? "month",
    });
  }

  extractions(variable: string, granularity = "quarter") {
    return this.get<ExtractionSeries>(`/series/extractions/${variable}`, { granularity });
  }

  suggest(terms: string[], k: number, exclude: string[]) {
    return this.send<SuggestResult>("POST", "/topics/suggest", { terms, k, exclude });
  }

  getDictionary(name: string) {
    return this.get<{ name: string; terms: string[] }>(`/dictionaries/${name}`);
  }

  putDictionary(name: string, terms: string[]) {
    return this.send<{ name: string; terms: string[] }>("PUT", `/dictionaries/${name}`, {
      name,
      terms,
    });
  }
}
