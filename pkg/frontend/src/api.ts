/**
 * Thin typed client over the /v1 wire API.
 *
 * Network failures throw; HTTP 422 is surfaced as a structured
 * SubmitResult so the form can render field-level errors. Everything the
 * UI knows comes from these endpoints - the server is the source of truth.
 */

import type {
  AnnotationPayload,
  ExportResponse,
  NextResponse,
  ProgressResponse,
  SubmitResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async nextTask(sessionId: string, annotatorId: string): Promise<NextResponse> {
    const response = await this.fetchFn(
      this.url(`/v1/sessions/${sessionId}/annotators/${annotatorId}/next`),
    );
    if (!response.ok) {
      throw new ApiError(`next task failed: ${response.status}`, response.status);
    }
    return (await response.json()) as NextResponse;
  }

  async submit(payload: AnnotationPayload): Promise<SubmitResult> {
    const response = await this.fetchFn(this.url("/v1/annotations"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (response.ok) {
      return { ok: true };
    }
    if (response.status === 422) {
      const body = (await response.json()) as { errors?: Record<string, string> };
      return { ok: false, status: 422, errors: body.errors ?? {} };
    }
    throw new ApiError(`submit failed: ${response.status}`, response.status);
  }

  async progress(sessionId: string): Promise<ProgressResponse> {
    const response = await this.fetchFn(this.url(`/v1/sessions/${sessionId}/progress`));
    if (!response.ok) {
      throw new ApiError(`progress failed: ${response.status}`, response.status);
    }
    return (await response.json()) as ProgressResponse;
  }

  async exportJson(sessionId: string): Promise<ExportResponse> {
    const response = await this.fetchFn(
      this.url(`/v1/sessions/${sessionId}/export?format=json`),
    );
    if (!response.ok) {
      throw new ApiError(`export failed: ${response.status}`, response.status);
    }
    return (await response.json()) as ExportResponse;
  }
}
