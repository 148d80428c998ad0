/**
 * DOM rendering. One TaskView is built per task; state changes update
 * classes and error slots in place so the comment box never loses focus
 * or content. Codebook hint cards render collapsed and carry no controls,
 * so a hint can never preselect a judgment.
 */

import { JudgmentForm } from "./form.js";
import type { AnnotationTask, ExportedRecord } from "./types.js";
import { SCORE_LABELS, SCORE_ORDER, SENTIMENT_LABELS } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export interface TaskViewHandles {
  root: HTMLElement;
  scoreButtons: Map<number, HTMLButtonElement>;
  sentimentButtons: Map<number, HTMLButtonElement>;
  altButtons: Map<number, HTMLButtonElement>;
  toggles: {
    deleted: HTMLButtonElement;
    foreign: HTMLButtonElement;
    callingOut: HTMLButtonElement;
    ihra: HTMLButtonElement;
  };
  altRow: HTMLElement;
  commentBox: HTMLTextAreaElement;
  submitButton: HTMLButtonElement;
  errorBox: HTMLElement;
  fieldErrorSlots: Map<string, HTMLElement>;
  timerLabel: HTMLElement;
}

export function renderBanner(container: HTMLElement, message: string,
                             onRetry: () => void): void {
  container.textContent = "";
  const banner = el("div", { class: "banner", role: "alert" });
  banner.append(el("span", {}, message));
  const retry = el("button", { class: "retry" }, "Retry");
  retry.addEventListener("click", onRetry);
  banner.append(retry);
  container.append(banner);
}

export function clearBanner(container: HTMLElement): void {
  container.textContent = "";
}

function selectorRow(
  label: string,
  field: string,
  values: readonly number[],
  labels: Record<number, string>,
  onPick: (value: number) => void,
  buttons: Map<number, HTMLButtonElement>,
  slots: Map<string, HTMLElement>,
): HTMLElement {
  const row = el("div", { class: `selector selector-${field}` });
  row.append(el("span", { class: "selector-label" }, label));
  for (const value of values) {
    const button = el("button", {
      type: "button",
      class: "choice",
      "data-field": field,
      "data-value": String(value),
      title: labels[value] ?? String(value),
    }, value > 0 ? `+${value}` : String(value));
    button.append(el("small", {}, " " + (labels[value] ?? "")));
    button.addEventListener("click", () => onPick(value));
    buttons.set(value, button);
    row.append(button);
  }
  const slot = el("span", { class: "field-error", "data-error-for": field });
  slots.set(field, slot);
  row.append(slot);
  return row;
}

export function renderTask(
  container: HTMLElement,
  task: AnnotationTask,
  form: JudgmentForm,
  handlers: { onChange: () => void; onSubmit: () => void },
): TaskViewHandles {
  container.textContent = "";
  const root = el("section", { class: "task" });

  const header = el("header", { class: "task-header" });
  header.append(el("span", { class: "progress" },
                   `${task.position} of ${task.total}`));
  const timerLabel = el("span", { class: "timer", "aria-label": "elapsed" }, "0.0s");
  header.append(timerLabel);
  root.append(header);

  const tweet = el("article", { class: "tweet" });
  tweet.append(el("p", { class: "tweet-text" }, task.text));
  const meta = el("p", { class: "tweet-meta" });
  meta.append(el("span", {}, `@${task.author_handle} · ${task.created_at} · `));
  meta.append(el("a", { href: task.permalink, target: "_blank", rel: "noopener" },
                 "open on Twitter"));
  tweet.append(meta);
  root.append(tweet);

  if (task.codebook_hits.length > 0) {
    const hints = el("div", { class: "hints" });
    hints.append(el("p", { class: "hints-label" },
                    "Codebook hints (context only, never a judgment):"));
    for (const hit of task.codebook_hits) {
      const card = el("details", { class: "hint-card" });
      card.append(el("summary", {}, `${hit.entry_id}: "${hit.surface_form}"`));
      const body = el("div", { class: "hint-body", "data-entry": hit.entry_id });
      if (hit.ambiguity_note) {
        body.append(el("p", { class: "hint-note" }, hit.ambiguity_note));
      }
      card.append(body);
      hints.append(card);
    }
    root.append(hints);
  }

  const formBox = el("div", { class: "judgment-form" });
  const scoreButtons = new Map<number, HTMLButtonElement>();
  const sentimentButtons = new Map<number, HTMLButtonElement>();
  const altButtons = new Map<number, HTMLButtonElement>();
  const fieldErrorSlots = new Map<string, HTMLElement>();

  formBox.append(selectorRow("Antisemitic?", "score", SCORE_ORDER, SCORE_LABELS,
                             (value) => { form.setScore(value); handlers.onChange(); },
                             scoreButtons, fieldErrorSlots));
  formBox.append(selectorRow("Sentiment", "sentiment", SCORE_ORDER,
                             SENTIMENT_LABELS,
                             (value) => { form.setSentiment(value); handlers.onChange(); },
                             sentimentButtons, fieldErrorSlots));

  const toggles = el("div", { class: "toggles" });
  const mkToggle = (label: string, field: string, onToggle: () => void) => {
    const button = el("button", {
      type: "button", class: "toggle", "data-field": field,
    }, label);
    button.addEventListener("click", () => { onToggle(); handlers.onChange(); });
    toggles.append(button);
    return button;
  };
  const deletedToggle = mkToggle("Deleted (d)", "deleted",
                                 () => form.toggleDeleted());
  const foreignToggle = mkToggle("Foreign language (f)", "foreign_language",
                                 () => form.toggleForeignLanguage());
  const callingOutToggle = mkToggle("Calling out antisemitism (c)", "calling_out",
                                    () => form.toggleCallingOut());
  const ihraToggle = mkToggle("Disagree with definition (i)", "ihra_disagree",
                              () => form.toggleIhraDisagree());
  formBox.append(toggles);

  const altRow = selectorRow("Own judgment", "alt_judgment", SCORE_ORDER,
                             SCORE_LABELS,
                             (value) => { form.setAltJudgment(value); handlers.onChange(); },
                             altButtons, fieldErrorSlots);
  altRow.classList.add("alt-row");
  formBox.append(altRow);

  const commentBox = el("textarea", {
    class: "comment", placeholder: "Comment (optional)", rows: "2",
  });
  commentBox.addEventListener("input", () => {
    form.setComment(commentBox.value);
    handlers.onChange();
  });
  formBox.append(commentBox);

  const errorBox = el("div", { class: "errors", role: "alert" });
  formBox.append(errorBox);

  const submitButton = el("button", { type: "button", class: "submit" },
                          "Submit (Enter)");
  submitButton.addEventListener("click", handlers.onSubmit);
  formBox.append(submitButton);

  root.append(formBox);
  container.append(root);

  return {
    root,
    scoreButtons,
    sentimentButtons,
    altButtons,
    toggles: {
      deleted: deletedToggle,
      foreign: foreignToggle,
      callingOut: callingOutToggle,
      ihra: ihraToggle,
    },
    altRow,
    commentBox,
    submitButton,
    errorBox,
    fieldErrorSlots,
    timerLabel,
  };
}

export function updateTaskView(view: TaskViewHandles, form: JudgmentForm): void {
  for (const [value, button] of view.scoreButtons) {
    button.classList.toggle("selected", form.score === value);
    button.disabled = form.judgmentLocked;
  }
  for (const [value, button] of view.sentimentButtons) {
    button.classList.toggle("selected", form.sentiment === value);
    button.disabled = form.judgmentLocked;
  }
  for (const [value, button] of view.altButtons) {
    button.classList.toggle("selected", form.altJudgment === value);
  }
  view.altRow.style.display = form.ihraDisagree ? "" : "none";
  view.toggles.deleted.classList.toggle("selected", form.deleted);
  view.toggles.foreign.classList.toggle("selected", form.foreignLanguage);
  view.toggles.callingOut.classList.toggle("selected", form.callingOut);
  view.toggles.ihra.classList.toggle("selected", form.ihraDisagree);
  view.submitButton.disabled = !form.canSubmit;

  const general: string[] = [];
  for (const slot of view.fieldErrorSlots.values()) {
    slot.textContent = "";
  }
  for (const [field, message] of Object.entries(form.errors)) {
    const slot = view.fieldErrorSlots.get(field);
    if (slot) {
      slot.textContent = message;
    } else {
      general.push(`${field}: ${message}`);
    }
  }
  view.errorBox.textContent = general.join("; ");
}

export function renderDone(
  container: HTMLElement,
  annotatorId: string,
  records: ExportedRecord[],
): void {
  container.textContent = "";
  const mine = records.filter((r) => r.annotator_id === annotatorId);
  const tally = (predicate: (r: ExportedRecord) => boolean) =>
    mine.filter(predicate).length;
  const root = el("section", { class: "done" });
  root.append(el("h2", {}, "Session complete"));
  root.append(el("p", {}, `${mine.length} tweets annotated by ${annotatorId}.`));
  const list = el("ul", { class: "tallies" });
  const rows: Array<[string, number]> = [
    ["Antisemitic (confident)", tally((r) => r.score === 2)],
    ["Antisemitic (not confident)", tally((r) => r.score === 1)],
    ["Not comprehensible", tally((r) => r.score === 0)],
    ["Not antisemitic (not confident)", tally((r) => r.score === -1)],
    ["Not antisemitic (confident)", tally((r) => r.score === -2)],
    ["Calling out antisemitism", tally((r) => r.calling_out)],
    ["Deleted", tally((r) => r.deleted)],
    ["Foreign language", tally((r) => r.foreign_language)],
  ];
  for (const [label, count] of rows) {
    list.append(el("li", { "data-tally": label }, `${label}: ${count}`));
  }
  root.append(list);
  container.append(root);
}
