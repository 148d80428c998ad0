/**
 * Judgment form state. Maps 1:1 onto the service's AnnotationRecord and
 * enforces the same shape the service validates:
 *
 * - deleted / foreign-language clear and lock the score and sentiment;
 * - submit is possible once a score OR a deleted/foreign toggle is set;
 * - an alternative judgment exists only while IHRA-disagree is on.
 *
 * Nothing here ever picks a value on the annotator's behalf; every field
 * starts empty and moves only on an explicit action.
 */

import type { AnnotationPayload, AnnotationTask, FieldErrors } from "./types.js";
import { SCORE_ORDER } from "./types.js";

export class JudgmentForm {
  score: number | null = null;
  sentiment: number | null = null;
  deleted = false;
  foreignLanguage = false;
  ihraDisagree = false;
  altJudgment: number | null = null;
  callingOut = false;
  comment = "";
  errors: FieldErrors = {};

  get judgmentLocked(): boolean {
    return this.deleted || this.foreignLanguage;
  }

  get canSubmit(): boolean {
    return this.judgmentLocked || this.score !== null;
  }

  setScore(value: number): void {
    if (this.judgmentLocked || !SCORE_ORDER.includes(value as never)) {
      return;
    }
    this.score = value;
  }

  moveScore(step: 1 | -1): void {
    if (this.judgmentLocked) {
      return;
    }
    if (this.score === null) {
      this.score = SCORE_ORDER[0];
      return;
    }
    const index = SCORE_ORDER.indexOf(this.score as never);
    const next = Math.min(Math.max(index + step, 0), SCORE_ORDER.length - 1);
    this.score = SCORE_ORDER[next] ?? null;
  }

  setSentiment(value: number): void {
    if (this.judgmentLocked || !SCORE_ORDER.includes(value as never)) {
      return;
    }
    this.sentiment = value;
  }

  toggleDeleted(): void {
    this.deleted = !this.deleted;
    if (this.judgmentLocked) {
      this.score = null;
      this.sentiment = null;
    }
  }

  toggleForeignLanguage(): void {
    this.foreignLanguage = !this.foreignLanguage;
    if (this.judgmentLocked) {
      this.score = null;
      this.sentiment = null;
    }
  }

  toggleIhraDisagree(): void {
    this.ihraDisagree = !this.ihraDisagree;
    if (!this.ihraDisagree) {
      this.altJudgment = null;
    }
  }

  setAltJudgment(value: number): void {
    if (!this.ihraDisagree || !SCORE_ORDER.includes(value as never)) {
      return;
    }
    this.altJudgment = value;
  }

  toggleCallingOut(): void {
    this.callingOut = !this.callingOut;
  }

  setComment(text: string): void {
    this.comment = text;
  }

  applyErrors(errors: FieldErrors): void {
    this.errors = { ...errors };
  }

  clearErrors(): void {
    this.errors = {};
  }

  reset(): void {
    this.score = null;
    this.sentiment = null;
    this.deleted = false;
    this.foreignLanguage = false;
    this.ihraDisagree = false;
    this.altJudgment = null;
    this.callingOut = false;
    this.comment = "";
    this.errors = {};
  }

  toPayload(task: AnnotationTask, annotatorId: string,
            durationSeconds: number): AnnotationPayload {
    return {
      sample_id: task.sample_id,
      tweet_id: task.tweet_id,
      annotator_id: annotatorId,
      deleted: this.deleted,
      foreign_language: this.foreignLanguage,
      score: this.score,
      ihra_disagree: this.ihraDisagree,
      alt_judgment: this.altJudgment,
      sentiment: this.sentiment,
      calling_out: this.callingOut,
      comment: this.comment,
      duration_seconds: durationSeconds,
    };
  }
}
