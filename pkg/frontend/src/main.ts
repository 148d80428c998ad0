/**
 * Entry point. Session parameters come from the URL:
 *   index.html?base=http://127.0.0.1:8400&session=jew2018&annotator=B
 */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const root = document.getElementById("app");
if (root) {
  const base = param("base", window.location.origin);
  const session = param("session", "");
  const annotator = param("annotator", "");
  if (!session || !annotator) {
    root.textContent =
      "Missing ?session=...&annotator=... parameters (optionally &base=http://host:port).";
  } else {
    const app = new App(root, new ApiClient(base), session, annotator);
    void app.start();
  }
}
