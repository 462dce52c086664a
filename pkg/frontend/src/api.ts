// Thin fetch wrapper for the /v1 API. The fetch implementation is
// injectable so contract tests can run against an in-memory stub.

import {
  AdjudicationItem,
  Answer,
  ApiError,
  BatchView,
  ConflictBody,
  ConflictResponse,
  ProjectStatus,
  SubmitReceipt,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export interface ApiClientOptions {
  baseUrl?: string;
  token?: string;
  fetchImpl?: FetchLike;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchImpl: FetchLike;

  constructor(
    private readonly projectId: string,
    options: ApiClientOptions = {},
  ) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  private headers(json: boolean): Record<string, string> {
    const h: Record<string, string> = {};
    if (json) h["Content-Type"] = "application/json";
    if (this.token !== undefined) h["X-Auth-Token"] = this.token;
    return h;
  }

  private url(path: string): string {
    return `${this.baseUrl}/v1/projects/${encodeURIComponent(this.projectId)}${path}`;
  }

  /** Request the next open batch; null when nothing is left to annotate.
   *  A 409 (worker already holds a batch) resolves to that assignment so
   *  a refreshed tab can resume where it left off. */
  async nextBatch(worker: string): Promise<BatchView | null> {
    const res = await this.fetchImpl(
      this.url(`/next-batch?worker=${encodeURIComponent(worker)}`),
      { headers: this.headers(false) },
    );
    if (res.status === 204) return null;
    if (res.status === 409) {
      const body = (await res.json()) as ConflictBody;
      throw new ConflictResponse(body.assignment);
    }
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as BatchView;
  }

  async submitLabels(
    worker: string,
    batchId: string,
    answers: Record<number, Answer>,
  ): Promise<SubmitReceipt> {
    const res = await this.fetchImpl(
      this.url(`/batches/${encodeURIComponent(batchId)}/labels`),
      {
        method: "POST",
        headers: this.headers(true),
        body: JSON.stringify({ worker, answers }),
      },
    );
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as SubmitReceipt;
  }

  /** Raw status body text alongside the parsed value: the dashboard
   *  renders fetched bytes, never client-side recomputations. */
  async status(): Promise<{ raw: string; parsed: ProjectStatus }> {
    const res = await this.fetchImpl(this.url("/status"), {
      headers: this.headers(false),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    const raw = await res.text();
    return { raw, parsed: JSON.parse(raw) as ProjectStatus };
  }

  async adjudicationQueue(): Promise<AdjudicationItem[]> {
    const res = await this.fetchImpl(this.url("/adjudication-queue"), {
      headers: this.headers(false),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as AdjudicationItem[];
  }

  async adjudicate(
    tweetId: string,
    label: boolean,
    expert: string,
  ): Promise<{ tweet_id: string; label: boolean }> {
    const res = await this.fetchImpl(this.url("/adjudications"), {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({ tweet_id: tweetId, label, expert }),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as { tweet_id: string; label: boolean };
  }
}
