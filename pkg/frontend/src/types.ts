/** Wire types for the /v1 annotation API. */

export interface CodebookHit {
  entry_id: string;
  span: [number, number];
  surface_form: string;
  ambiguity_note: string | null;
}

export interface AnnotationTask {
  session_id: string;
  sample_id: string;
  tweet_id: string;
  text: string;
  created_at: string;
  author_handle: string;
  permalink: string;
  codebook_hits: CodebookHit[];
  position: number;
  total: number;
}

export type NextResponse = AnnotationTask | { done: true };

export function isDone(response: NextResponse): response is { done: true } {
  return (response as { done?: boolean }).done === true;
}

/** Maps 1:1 onto the service's AnnotationRecord. */
export interface AnnotationPayload {
  sample_id: string;
  tweet_id: string;
  annotator_id: string;
  deleted: boolean;
  foreign_language: boolean;
  score: number | null;
  ihra_disagree: boolean;
  alt_judgment: number | null;
  sentiment: number | null;
  calling_out: boolean;
  comment: string;
  duration_seconds: number;
}

export type FieldErrors = Record<string, string>;

export type SubmitResult =
  | { ok: true }
  | { ok: false; status: number; errors: FieldErrors };

export interface AnnotatorProgress {
  submitted: number;
  total: number;
  mean_duration_seconds: number | null;
}

export interface ProgressResponse {
  session_id: string;
  sample_id: string;
  total: number;
  annotators: Record<string, AnnotatorProgress>;
}

export interface ExportedRecord {
  sample_id: string;
  tweet_id: string;
  annotator_id: string;
  deleted: boolean;
  foreign_language: boolean;
  score: number | null;
  ihra_disagree: boolean;
  alt_judgment: number | null;
  sentiment: number | null;
  calling_out: boolean;
  comment: string;
  duration_seconds: number;
  submitted_at: string | null;
}

export interface ExportResponse {
  schema_version: number;
  records: ExportedRecord[];
}

/** Judgment scale, in display order (most confident antisemitic first). */
export const SCORE_ORDER = [2, 1, 0, -1, -2] as const;

export const SCORE_LABELS: Record<number, string> = {
  2: "Antisemitic (confident)",
  1: "Antisemitic (not confident)",
  0: "Not comprehensible",
  [-1]: "Not antisemitic (not confident)",
  [-2]: "Not antisemitic (confident)",
};

export const SENTIMENT_LABELS: Record<number, string> = {
  2: "Very positive",
  1: "Positive",
  0: "Neutral / not comprehensible",
  [-1]: "Negative",
  [-2]: "Very negative",
};
