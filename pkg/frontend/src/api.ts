/**
 * Thin typed client for the authoring service.
 *
 * Every request made through the client is appended to `log`, so tests can
 * assert that a user-facing action issued exactly the endpoint calls it is
 * supposed to, and nothing else.
 */

import type {
  EmojiSearchResult,
  PaletteInfo,
  PlanEdits,
  PlanJson,
  PreviewResult,
  RecommendationPage,
  SessionCreated,
  SpecJson,
} from "./types.js";

export interface RequestRecord {
  method: string;
  path: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly log: RequestRecord[] = [];
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // Bind the global fetch so it keeps its expected receiver in browsers.
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    contentType = "application/json",
  ): Promise<T> {
    this.log.push({ method, path });
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": contentType };
      init.body = contentType === "application/json" ? JSON.stringify(body) : (body as string);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const raw = await response.text();
    if (!response.ok) {
      let detail = raw;
      try {
        const parsed = JSON.parse(raw) as { detail?: unknown };
        if (typeof parsed.detail === "string") detail = parsed.detail;
      } catch {
        // non-JSON error body: keep the raw text
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(raw) as T;
  }

  createSession(csvText: string): Promise<SessionCreated> {
    return this.request<SessionCreated>("POST", "/sessions", csvText, "text/csv");
  }

  recommendations(
    sessionId: string,
    target: string,
    page = 1,
    pageSize?: number,
  ): Promise<RecommendationPage> {
    const params = new URLSearchParams({ target, page: String(page) });
    if (pageSize !== undefined) params.set("page_size", String(pageSize));
    return this.request<RecommendationPage>(
      "GET",
      `/sessions/${sessionId}/recommendations?${params.toString()}`,
    );
  }

  updatePlan(sessionId: string, edits: PlanEdits): Promise<{ plan: PlanJson }> {
    return this.request<{ plan: PlanJson }>("PUT", `/sessions/${sessionId}/plan`, edits);
  }

  updateSpec(sessionId: string, spec: SpecJson): Promise<{ spec: SpecJson }> {
    return this.request<{ spec: SpecJson }>("PUT", `/sessions/${sessionId}/spec`, spec);
  }

  preview(sessionId: string): Promise<PreviewResult> {
    return this.request<PreviewResult>("GET", `/sessions/${sessionId}/preview`);
  }

  searchEmoji(query: string, limit?: number): Promise<EmojiSearchResult> {
    const params = new URLSearchParams({ q: query });
    if (limit !== undefined) params.set("limit", String(limit));
    return this.request<EmojiSearchResult>("GET", `/emoji/search?${params.toString()}`);
  }

  palettes(): Promise<{ palettes: PaletteInfo[] }> {
    return this.request<{ palettes: PaletteInfo[] }>("GET", "/palettes");
  }
}
