// Shared mock service for the planner tests: a fetch stand-in that routes
// on path, records every request, and answers from canned fixtures. All
// assertions about "what the UI asked the service" read the traffic log.

import type { FetchLike } from "../src/api.js";

export interface RecordedCall {
  path: string;
  method: string;
  body: unknown;
}

export interface MockService {
  fetchFn: FetchLike;
  traffic: RecordedCall[];
  /** Replace the handler for one path. */
  on(path: string, handler: Handler): void;
}

type Handler = (body: unknown) => Response | object | Promise<Response>;

export const TEN_BANDS = [
  { label: "Worse", lower: 0.0, upper: 0.1 },
  { label: "VeryLow", lower: 0.1, upper: 0.2 },
  { label: "Low", lower: 0.2, upper: 0.3 },
  { label: "Normal", lower: 0.3, upper: 0.4 },
  { label: "AboveNormal", lower: 0.4, upper: 0.5 },
  { label: "High", lower: 0.5, upper: 0.6 },
  { label: "VeryHigh", lower: 0.6, upper: 0.7 },
  { label: "Best", lower: 0.7, upper: 0.8 },
  { label: "Excellent", lower: 0.8, upper: 0.9 },
  { label: "Ideal", lower: 0.9, upper: 1.0 },
];

export const LISTING = [
  {
    coeff_id: "c0ffee0000000001",
    model: "process",
    fitted_at: "2024-03-01T12:00:00+00:00",
    fitted_from: ["P1", "P2", "P3", "P4", "P5"],
    r_squared: 0.91,
  },
];

export function jsonResponse(data: unknown, status = 200): Response {
  return new Response(JSON.stringify(data), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function errorResponse(
  status: number,
  errorClass: string,
  message: string,
): Response {
  return jsonResponse(
    { detail: { error_class: errorClass, message } },
    status,
  );
}

export function mockService(overrides: Record<string, Handler> = {}): MockService {
  const handlers: Record<string, Handler> = {
    "/api/v1/bands": () => TEN_BANDS,
    "/api/v1/coefficients": () => LISTING,
    "/api/v1/predict": () => ({
      y_raw: 0.5,
      y_clamped: 0.5,
      band: "High",
      out_of_range: false,
    }),
    "/api/v1/tune": () => ({
      value: 0.3,
      feasible: true,
      band: "Normal",
      integer_candidates: null,
    }),
    ...overrides,
  };
  const traffic: RecordedCall[] = [];

  const fetchFn: FetchLike = async (input, init) => {
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    traffic.push({ path, method: init?.method ?? "GET", body });
    const handler = handlers[path];
    if (!handler) return new Response("not found", { status: 404 });
    const result = await handler(body);
    return result instanceof Response ? result : jsonResponse(result);
  };

  return {
    fetchFn,
    traffic,
    on(path, handler) {
      handlers[path] = handler;
    },
  };
}
