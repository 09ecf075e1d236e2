// Typed client for the analytics service. Every number the UI shows comes
// out of one of these responses; the client itself never computes metrics.

import { API_BASE_URL } from "./config.js";

export interface BandRow {
  label: string;
  lower: number;
  upper: number;
}

export interface CoefficientSummary {
  coeff_id: string;
  model: "process" | "team";
  fitted_at: string;
  fitted_from: string[];
  r_squared: number | null;
}

export interface PredictionResponse {
  y_raw: number;
  y_clamped: number | null;
  band: string | null;
  out_of_range: boolean;
}

export interface IntegerCandidate {
  value: number;
  y_raw: number;
  band: string | null;
  feasible: boolean;
}

export interface TuneResponse {
  value: number;
  feasible: boolean;
  band: string | null;
  integer_candidates: IntegerCandidate[] | null;
}

/** 4xx/5xx with the service's error_class preserved verbatim. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorClass: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** fetch itself failed: service down or unreachable. */
export class OfflineError extends Error {
  constructor(cause: unknown) {
    super("service unreachable");
    this.name = "OfflineError";
    this.cause = cause;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = API_BASE_URL,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new OfflineError(err);
    }
    if (!response.ok) {
      let errorClass = `Http${response.status}`;
      let message = response.statusText;
      try {
        const body = (await response.json()) as {
          detail?: { error_class?: string; message?: string };
        };
        if (body.detail?.error_class) errorClass = body.detail.error_class;
        if (body.detail?.message) message = body.detail.message;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, errorClass, message);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async healthz(): Promise<boolean> {
    try {
      const response = await this.fetchFn(this.baseUrl + "/healthz");
      return response.ok;
    } catch {
      return false;
    }
  }

  bands(): Promise<BandRow[]> {
    return this.request<BandRow[]>("/api/v1/bands");
  }

  coefficients(): Promise<CoefficientSummary[]> {
    return this.request<CoefficientSummary[]>("/api/v1/coefficients");
  }

  predict(
    coeffId: string,
    x: Record<string, number>,
  ): Promise<PredictionResponse> {
    return this.post<PredictionResponse>("/api/v1/predict", {
      coeff_id: coeffId,
      x,
    });
  }

  tune(
    coeffId: string,
    target: number,
    solveFor: number,
    fixed: Record<string, number>,
  ): Promise<TuneResponse> {
    return this.post<TuneResponse>("/api/v1/tune", {
      coeff_id: coeffId,
      target,
      solve_for: solveFor,
      fixed,
    });
  }
}
