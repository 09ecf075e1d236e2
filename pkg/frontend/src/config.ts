// Single point of configuration for where the analytics service lives.
// Override before the app boots (e.g. from an inline script tag):
//   window.API_BASE_URL = "http://analytics.internal:8000";

declare global {
  // eslint-disable-next-line no-var
  var API_BASE_URL: string | undefined;
}

export const API_BASE_URL: string =
  (globalThis.API_BASE_URL ?? "http://127.0.0.1:8000").replace(/\/+$/, "");
