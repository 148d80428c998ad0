/**
 * Controller: pulls the next task, renders it, collects the judgment,
 * submits, advances. The server is authoritative for position and stored
 * records, so reloading the page mid-session resumes exactly where the
 * unsubmitted task left off. A failed request never discards form state.
 */

import { ApiClient } from "./api.js";
import { JudgmentForm } from "./form.js";
import { actionForKey } from "./keyboard.js";
import { ActiveTimer } from "./timer.js";
import type { AnnotationTask } from "./types.js";
import { isDone } from "./types.js";
import {
  clearBanner,
  renderBanner,
  renderDone,
  renderTask,
  updateTaskView,
  type TaskViewHandles,
} from "./view.js";

export interface AppOptions {
  timer?: ActiveTimer;
  window?: Window;
}

export class App {
  readonly form = new JudgmentForm();
  readonly timer: ActiveTimer;
  currentTask: AnnotationTask | null = null;
  private view: TaskViewHandles | null = null;
  private submitting = false;
  private detachTimer: (() => void) | null = null;
  private timerInterval: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly annotatorId: string,
    options: AppOptions = {},
  ) {
    this.timer = options.timer ?? new ActiveTimer();
    this.win = options.window ?? window;
    this.detachTimer = this.timer.attach(this.win);
    this.bannerHost = document.createElement("div");
    this.taskHost = document.createElement("div");
    this.root.append(this.bannerHost, this.taskHost);
    this.keyHandler = (event: Event) => this.handleKey(event as KeyboardEvent);
    this.win.addEventListener("keydown", this.keyHandler);
  }

  private readonly win: Window;
  private readonly keyHandler: (event: Event) => void;
  private readonly bannerHost: HTMLDivElement;
  private readonly taskHost: HTMLDivElement;

  async start(): Promise<void> {
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    clearBanner(this.bannerHost);
    let response;
    try {
      response = await this.api.nextTask(this.sessionId, this.annotatorId);
    } catch (error) {
      renderBanner(this.bannerHost,
                   "Annotation service unreachable. Nothing was lost.",
                   () => void this.loadNext());
      return;
    }
    if (isDone(response)) {
      await this.showDone();
      return;
    }
    this.currentTask = response;
    this.form.reset();
    this.view = renderTask(this.taskHost, response, this.form, {
      onChange: () => this.refresh(),
      onSubmit: () => void this.submit(),
    });
    this.refresh();
    this.timer.start();
    if (this.timerInterval !== null) {
      clearInterval(this.timerInterval);
    }
    this.timerInterval = setInterval(() => {
      if (this.view) {
        this.view.timerLabel.textContent = `${this.timer.elapsedSeconds().toFixed(1)}s`;
      }
    }, 500);
  }

  refresh(): void {
    if (this.view) {
      updateTaskView(this.view, this.form);
    }
  }

  async submit(): Promise<void> {
    if (!this.currentTask || !this.form.canSubmit || this.submitting) {
      return;
    }
    this.submitting = true;
    try {
      const payload = this.form.toPayload(this.currentTask, this.annotatorId,
                                          this.timer.elapsedSeconds());
      let result;
      try {
        result = await this.api.submit(payload);
      } catch (error) {
        renderBanner(this.bannerHost,
                     "Submit failed to reach the service; your judgment is intact.",
                     () => void this.submit());
        return;
      }
      if (!result.ok) {
        this.form.applyErrors(result.errors);
        this.refresh();
        return;
      }
      this.form.clearErrors();
      await this.loadNext();
    } finally {
      this.submitting = false;
    }
  }

  handleKey(event: KeyboardEvent): void {
    if (!this.currentTask) {
      return;
    }
    const action = actionForKey(event);
    if (!action) {
      return;
    }
    event.preventDefault();
    switch (action.kind) {
      case "score":
        this.form.setScore(action.value);
        break;
      case "sentiment":
        this.form.setSentiment(action.value);
        break;
      case "move_score":
        this.form.moveScore(action.step);
        break;
      case "toggle":
        if (action.field === "deleted") this.form.toggleDeleted();
        else if (action.field === "foreign") this.form.toggleForeignLanguage();
        else if (action.field === "calling_out") this.form.toggleCallingOut();
        else this.form.toggleIhraDisagree();
        break;
      case "submit":
        void this.submit();
        return;
    }
    this.refresh();
  }

  private async showDone(): Promise<void> {
    this.currentTask = null;
    if (this.timerInterval !== null) {
      clearInterval(this.timerInterval);
      this.timerInterval = null;
    }
    try {
      const exported = await this.api.exportJson(this.sessionId);
      renderDone(this.taskHost, this.annotatorId, exported.records);
    } catch (error) {
      renderDone(this.taskHost, this.annotatorId, []);
    }
  }

  dispose(): void {
    this.win.removeEventListener("keydown", this.keyHandler);
    this.currentTask = null;
    if (this.detachTimer) {
      this.detachTimer();
      this.detachTimer = null;
    }
    if (this.timerInterval !== null) {
      clearInterval(this.timerInterval);
      this.timerInterval = null;
    }
  }
}
