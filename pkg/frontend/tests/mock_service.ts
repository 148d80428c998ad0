/**
 * In-process implementation of the /v1 wire contract for unit tests:
 * same endpoints, same response shapes, same validation rules (422 with
 * {"errors": {field: message}}) as the real service.
 */

import type { AnnotationPayload, CodebookHit } from "../src/types.js";

export interface MockTweet {
  tweet_id: string;
  text: string;
  created_at?: string;
  author_handle?: string;
  codebook_hits?: CodebookHit[];
}

const SCALE = [-2, -1, 0, 1, 2];

export class MockService {
  readonly annotations = new Map<string, AnnotationPayload & { submitted_at: string }>();
  failNextRequests = 0;

  constructor(
    readonly sessionId: string,
    readonly sampleId: string,
    readonly tweets: MockTweet[],
    readonly annotators: string[],
  ) {}

  get fetch() {
    return (url: string, init?: RequestInit): Promise<Response> =>
      this.handle(url, init);
  }

  private key(tweetId: string, annotatorId: string): string {
    return `${this.sampleId}|${tweetId}|${annotatorId}`;
  }

  recordFor(tweetId: string, annotatorId: string) {
    return this.annotations.get(this.key(tweetId, annotatorId));
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    if (this.failNextRequests > 0) {
      this.failNextRequests -= 1;
      throw new TypeError("fetch failed (simulated)");
    }
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const next = path.match(/^\/v1\/sessions\/([^/]+)\/annotators\/([^/]+)\/next$/);
    if (next) {
      return this.nextTask(next[1]!, next[2]!);
    }
    if (path === "/v1/annotations" && init?.method === "POST") {
      return this.submit(JSON.parse(String(init.body)) as AnnotationPayload);
    }
    const progress = path.match(/^\/v1\/sessions\/([^/]+)\/progress$/);
    if (progress) {
      return this.progress(progress[1]!);
    }
    const exportMatch = path.match(/^\/v1\/sessions\/([^/]+)\/export\?format=json$/);
    if (exportMatch) {
      return this.json({
        schema_version: 1,
        records: Array.from(this.annotations.values()),
      });
    }
    return this.json({ error: `no route for ${path}` }, 404);
  }

  private nextTask(sessionId: string, annotatorId: string): Response {
    if (sessionId !== this.sessionId || !this.annotators.includes(annotatorId)) {
      return this.json({ error: "unknown session or annotator" }, 404);
    }
    for (let index = 0; index < this.tweets.length; index += 1) {
      const tweet = this.tweets[index]!;
      if (this.annotations.has(this.key(tweet.tweet_id, annotatorId))) {
        continue;
      }
      return this.json({
        session_id: this.sessionId,
        sample_id: this.sampleId,
        tweet_id: tweet.tweet_id,
        text: tweet.text,
        created_at: tweet.created_at ?? "2018-06-01T12:00:00Z",
        author_handle: tweet.author_handle ?? "someone",
        permalink: `https://twitter.com/i/web/status/${tweet.tweet_id}`,
        codebook_hits: tweet.codebook_hits ?? [],
        position: index + 1,
        total: this.tweets.length,
      });
    }
    return this.json({ done: true });
  }

  private submit(payload: AnnotationPayload): Response {
    const errors: Record<string, string> = {};
    const flagged = payload.deleted || payload.foreign_language;
    for (const field of ["score", "sentiment", "alt_judgment"] as const) {
      const value = payload[field];
      if (value !== null && value !== undefined && !SCALE.includes(value)) {
        errors[field] = `must be one of ${JSON.stringify(SCALE)}`;
      }
    }
    if (flagged && payload.score !== null && payload.score !== undefined) {
      errors.score = "must be absent when deleted is set";
    }
    if (!flagged && (payload.score === null || payload.score === undefined)) {
      errors.score = "required unless deleted or foreign_language is set";
    }
    if (!this.tweets.some((t) => t.tweet_id === payload.tweet_id)) {
      errors.task = "no assigned task";
    }
    if (Object.keys(errors).length > 0) {
      return this.json({ errors }, 422);
    }
    this.annotations.set(this.key(payload.tweet_id, payload.annotator_id), {
      ...payload,
      submitted_at: "2019-04-01T10:00:00Z",
    });
    return this.json({ status: "ok" });
  }

  private progress(sessionId: string): Response {
    if (sessionId !== this.sessionId) {
      return this.json({ error: "unknown session" }, 404);
    }
    const annotators: Record<string, unknown> = {};
    for (const annotator of this.annotators) {
      const submitted = this.tweets.filter((t) =>
        this.annotations.has(this.key(t.tweet_id, annotator))).length;
      annotators[annotator] = {
        submitted,
        total: this.tweets.length,
        mean_duration_seconds: null,
      };
    }
    return this.json({
      session_id: this.sessionId,
      sample_id: this.sampleId,
      total: this.tweets.length,
      annotators,
    });
  }
}
