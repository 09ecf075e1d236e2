import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, LatestWins } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("collapses a burst into one trailing call with the last arguments", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    for (let i = 1; i <= 10; i++) fn(i);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(149);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([10]);
  });

  it("restarts the window on each call", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(100);
    fn(2);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(50);
    expect(calls).toEqual([2]);
  });

  it("fires again for input after a completed window", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(150);
    fn(2);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([1, 2]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    fn.cancel();
    vi.advanceTimersByTime(300);
    expect(calls).toEqual([]);
  });

  it("flush invokes immediately", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(7);
    fn.flush();
    expect(calls).toEqual([7]);
    vi.advanceTimersByTime(300);
    expect(calls).toEqual([7]);
  });
});

describe("LatestWins", () => {
  it("only the newest token is current", () => {
    const gate = new LatestWins();
    const first = gate.begin();
    const second = gate.begin();
    expect(gate.isCurrent(first)).toBe(false);
    expect(gate.isCurrent(second)).toBe(true);
  });

  it("tokens strictly increase", () => {
    const gate = new LatestWins();
    const a = gate.begin();
    const b = gate.begin();
    const c = gate.begin();
    expect(b).toBeGreaterThan(a);
    expect(c).toBeGreaterThan(b);
  });
});
