import { describe, expect, it } from "vitest";

import { actionForKey } from "../src/keyboard.js";

function key(init: KeyboardEventInit & { key: string }): KeyboardEvent {
  return new KeyboardEvent("keydown", init);
}

describe("actionForKey", () => {
  it("digits 1..5 select scores +2..-2", () => {
    expect(actionForKey(key({ key: "1" }))).toEqual({ kind: "score", value: 2 });
    expect(actionForKey(key({ key: "3" }))).toEqual({ kind: "score", value: 0 });
    expect(actionForKey(key({ key: "5" }))).toEqual({ kind: "score", value: -2 });
  });

  it("digits 6..0 select sentiment +2..-2", () => {
    expect(actionForKey(key({ key: "6" }))).toEqual({ kind: "sentiment", value: 2 });
    expect(actionForKey(key({ key: "0" }))).toEqual({ kind: "sentiment", value: -2 });
  });

  it("arrows move the score selection", () => {
    expect(actionForKey(key({ key: "ArrowDown" }))).toEqual({ kind: "move_score", step: 1 });
    expect(actionForKey(key({ key: "ArrowUp" }))).toEqual({ kind: "move_score", step: -1 });
  });

  it("letter toggles", () => {
    expect(actionForKey(key({ key: "d" }))).toEqual({ kind: "toggle", field: "deleted" });
    expect(actionForKey(key({ key: "f" }))).toEqual({ kind: "toggle", field: "foreign" });
    expect(actionForKey(key({ key: "c" }))).toEqual({ kind: "toggle", field: "calling_out" });
    expect(actionForKey(key({ key: "I" }))).toEqual({ kind: "toggle", field: "ihra" });
  });

  it("enter submits", () => {
    expect(actionForKey(key({ key: "Enter" }))).toEqual({ kind: "submit" });
  });

  it("ignores keys while typing a comment, except ctrl+enter", () => {
    const textarea = document.createElement("textarea");
    document.body.append(textarea);
    let seen: KeyboardEvent | null = null;
    window.addEventListener("keydown", (event) => { seen = event; }, { once: true });
    textarea.dispatchEvent(new KeyboardEvent("keydown", { key: "1", bubbles: true }));
    expect(seen).not.toBeNull();
    expect(actionForKey(seen!)).toBeNull();

    window.addEventListener("keydown", (event) => { seen = event; }, { once: true });
    textarea.dispatchEvent(new KeyboardEvent("keydown",
      { key: "Enter", ctrlKey: true, bubbles: true }));
    expect(actionForKey(seen!)).toEqual({ kind: "submit" });
    textarea.remove();
  });

  it("ignores alt/meta chords", () => {
    expect(actionForKey(key({ key: "1", altKey: true }))).toBeNull();
    expect(actionForKey(key({ key: "d", metaKey: true }))).toBeNull();
  });
});
