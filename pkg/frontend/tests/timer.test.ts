import { describe, expect, it } from "vitest";

import { ActiveTimer } from "../src/timer.js";

function fakeClock(start = 0) {
  let now = start;
  const clock = () => now;
  return { clock, advance: (ms: number) => { now += ms; } };
}

describe("ActiveTimer", () => {
  it("measures active time only", () => {
    const { clock, advance } = fakeClock();
    const timer = new ActiveTimer(clock);
    timer.start();
    advance(30_000);
    timer.pause();
    advance(120_000); // window blurred: not counted
    timer.resume();
    advance(10_000);
    expect(timer.elapsedSeconds()).toBe(40);
  });

  it("start resets accumulated time", () => {
    const { clock, advance } = fakeClock();
    const timer = new ActiveTimer(clock);
    timer.start();
    advance(5_000);
    timer.start();
    advance(2_500);
    expect(timer.elapsedSeconds()).toBe(2.5);
  });

  it("pause and resume are idempotent", () => {
    const { clock, advance } = fakeClock();
    const timer = new ActiveTimer(clock);
    timer.start();
    timer.resume();
    advance(1_000);
    timer.pause();
    timer.pause();
    expect(timer.elapsedSeconds()).toBe(1);
  });

  it("attaches to window blur/focus", () => {
    const { clock, advance } = fakeClock();
    const timer = new ActiveTimer(clock);
    const detach = timer.attach(window);
    timer.start();
    advance(2_000);
    window.dispatchEvent(new Event("blur"));
    advance(50_000);
    window.dispatchEvent(new Event("focus"));
    advance(1_000);
    expect(timer.elapsedSeconds()).toBe(3);
    detach();
  });
});
