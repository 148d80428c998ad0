/**
 * Keyboard map for the annotation flow:
 *
 *   1..5        score +2, +1, 0, -1, -2
 *   6..9, 0     sentiment +2, +1, 0, -1, -2
 *   arrows      move the score selection up/down
 *   d / f       deleted / foreign-language toggles
 *   c / i       calling-out / IHRA-disagree toggles
 *   Enter       submit
 *
 * Keys are ignored while typing in the comment box (except Ctrl+Enter,
 * which still submits).
 */

export type FormAction =
  | { kind: "score"; value: number }
  | { kind: "sentiment"; value: number }
  | { kind: "move_score"; step: 1 | -1 }
  | { kind: "toggle"; field: "deleted" | "foreign" | "calling_out" | "ihra" }
  | { kind: "submit" };

const SCORE_KEYS: Record<string, number> = { "1": 2, "2": 1, "3": 0, "4": -1, "5": -2 };
const SENTIMENT_KEYS: Record<string, number> = { "6": 2, "7": 1, "8": 0, "9": -1, "0": -2 };
const TOGGLE_KEYS: Record<string, "deleted" | "foreign" | "calling_out" | "ihra"> = {
  d: "deleted",
  f: "foreign",
  c: "calling_out",
  i: "ihra",
};

function isTypingTarget(target: EventTarget | null): boolean {
  if (!target || !(target as Element).tagName) {
    return false;
  }
  const tag = (target as Element).tagName.toLowerCase();
  return tag === "textarea" || tag === "input" || tag === "select";
}

export function actionForKey(event: KeyboardEvent): FormAction | null {
  if (event.altKey || event.metaKey) {
    return null;
  }
  if (isTypingTarget(event.target)) {
    if (event.key === "Enter" && event.ctrlKey) {
      return { kind: "submit" };
    }
    return null;
  }
  if (event.key === "Enter") {
    return { kind: "submit" };
  }
  if (event.key === "ArrowDown" || event.key === "ArrowRight") {
    return { kind: "move_score", step: 1 };
  }
  if (event.key === "ArrowUp" || event.key === "ArrowLeft") {
    return { kind: "move_score", step: -1 };
  }
  const score = SCORE_KEYS[event.key];
  if (score !== undefined) {
    return { kind: "score", value: score };
  }
  const sentiment = SENTIMENT_KEYS[event.key];
  if (sentiment !== undefined) {
    return { kind: "sentiment", value: sentiment };
  }
  const toggle = TOGGLE_KEYS[event.key.toLowerCase()];
  if (toggle !== undefined && !event.ctrlKey) {
    return { kind: "toggle", field: toggle };
  }
  return null;
}
