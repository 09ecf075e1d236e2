import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, OfflineError } from "../src/api.js";
import { errorResponse, mockService } from "./helpers.js";

const BASE = "http://service.test:8000";

describe("ApiClient", () => {
  it("joins the base url and parses band rows", async () => {
    const svc = mockService();
    const calls: string[] = [];
    const client = new ApiClient(BASE, (input, init) => {
      calls.push(input);
      return svc.fetchFn(input, init);
    });
    const bands = await client.bands();
    expect(calls).toEqual([`${BASE}/api/v1/bands`]);
    expect(bands).toHaveLength(10);
    expect(bands[3]).toEqual({ label: "Normal", lower: 0.3, upper: 0.4 });
  });

  it("posts predict bodies with coeff_id and x only", async () => {
    const svc = mockService();
    const client = new ApiClient(BASE, svc.fetchFn);
    await client.predict("abc123", { x1: 2, x2: 1, x3: 3, x4: 4 });
    const call = svc.traffic.at(-1)!;
    expect(call.path).toBe("/api/v1/predict");
    expect(call.method).toBe("POST");
    expect(call.body).toEqual({
      coeff_id: "abc123",
      x: { x1: 2, x2: 1, x3: 3, x4: 4 },
    });
  });

  it("posts tune bodies in the service's shape", async () => {
    const svc = mockService();
    const client = new ApiClient(BASE, svc.fetchFn);
    await client.tune("abc123", 0.3, 3, { x1: 2, x2: 1, x4: 4 });
    expect(svc.traffic.at(-1)!.body).toEqual({
      coeff_id: "abc123",
      target: 0.3,
      solve_for: 3,
      fixed: { x1: 2, x2: 1, x4: 4 },
    });
  });

  it("surfaces the service error class verbatim", async () => {
    const svc = mockService();
    svc.on("/api/v1/tune", () =>
      errorResponse(422, "UnsolvableParameter", "x2 has a zero coefficient"),
    );
    const client = new ApiClient(BASE, svc.fetchFn);
    const err = await client.tune("abc123", 0.3, 2, {}).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.errorClass).toBe("UnsolvableParameter");
    expect(err.message).toBe("x2 has a zero coefficient");
  });

  it("maps unreachable service to OfflineError", async () => {
    const client = new ApiClient(BASE, () =>
      Promise.reject(new TypeError("fetch failed")),
    );
    const err = await client.bands().catch((e) => e);
    expect(err).toBeInstanceOf(OfflineError);
  });

  it("healthz returns a boolean instead of throwing", async () => {
    const svc = mockService();
    svc.on("/healthz", () => new Response("ok"));
    const up = new ApiClient(BASE, svc.fetchFn);
    expect(await up.healthz()).toBe(true);
    const down = new ApiClient(BASE, () =>
      Promise.reject(new TypeError("fetch failed")),
    );
    expect(await down.healthz()).toBe(false);
  });

  it("keeps the status line when the error body is not json", async () => {
    const client = new ApiClient(BASE, async () =>
      new Response("<html>oops</html>", { status: 500, statusText: "Server Error" }),
    );
    const err = await client.bands().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.errorClass).toBe("Http500");
  });
});
