/**
 * Active-evaluation timer: runs from task render to submit, pausing while
 * the window is blurred so duration_seconds measures attention, not
 * wall-clock time.
 */

export type Clock = () => number;

export class ActiveTimer {
  private accumulatedMs = 0;
  private runningSince: number | null = null;

  constructor(private readonly now: Clock = () => Date.now()) {}

  start(): void {
    this.accumulatedMs = 0;
    this.runningSince = this.now();
  }

  pause(): void {
    if (this.runningSince !== null) {
      this.accumulatedMs += this.now() - this.runningSince;
      this.runningSince = null;
    }
  }

  resume(): void {
    if (this.runningSince === null) {
      this.runningSince = this.now();
    }
  }

  get running(): boolean {
    return this.runningSince !== null;
  }

  elapsedSeconds(): number {
    const live = this.runningSince === null ? 0 : this.now() - this.runningSince;
    return Math.round((this.accumulatedMs + live) / 100) / 10;
  }

  /** Wire blur/focus pause-resume to a window. Returns a detach function. */
  attach(target: Window): () => void {
    const onBlur = () => this.pause();
    const onFocus = () => this.resume();
    target.addEventListener("blur", onBlur);
    target.addEventListener("focus", onFocus);
    return () => {
      target.removeEventListener("blur", onBlur);
      target.removeEventListener("focus", onFocus);
    };
  }
}
