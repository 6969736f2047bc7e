import { describe, expect, it } from "vitest";

import {
  DEFAULT_PARAMS,
  EXPERT_SLIDERS,
  TASK_SLIDERS,
  acknowledge,
  clampToRange,
  currentStyle,
  initialState,
  revertToLastGood,
  setParamValue,
  setTaskValue,
} from "../src/state.js";

describe("slider specs", () => {
  it("has one slider per task dimension with range [-1, 10]", () => {
    expect(TASK_SLIDERS).toHaveLength(3);
    for (const spec of TASK_SLIDERS) {
      expect(spec.min).toBe(-1);
      expect(spec.max).toBe(10);
    }
  });

  it("covers all 19 pipeline parameters in expert mode", () => {
    expect(EXPERT_SLIDERS).toHaveLength(19);
    const names = new Set(EXPERT_SLIDERS.map((s) => s.name));
    for (const key of Object.keys(DEFAULT_PARAMS)) {
      expect(names.has(key)).toBe(true);
    }
  });

  it("expert ranges contain the default style", () => {
    for (const spec of EXPERT_SLIDERS) {
      const value = DEFAULT_PARAMS[spec.name as keyof typeof DEFAULT_PARAMS]!;
      expect(value).toBeGreaterThanOrEqual(spec.min);
      expect(value).toBeLessThanOrEqual(spec.max);
    }
  });

  it("clamps values to the slider range", () => {
    const spec = TASK_SLIDERS[0];
    expect(clampToRange(spec, 99)).toBe(10);
    expect(clampToRange(spec, -99)).toBe(-1);
    expect(clampToRange(spec, 4.5)).toBe(4.5);
  });
});

describe("UiState", () => {
  it("starts in task mode with the zero vector and default parameters", () => {
    const state = initialState();
    expect(state.mode).toBe("task");
    expect(state.task).toEqual([0, 0, 0]);
    expect(state.params).toEqual(DEFAULT_PARAMS);
  });

  it("produces exactly one style source per mode", () => {
    const state = initialState();
    expect(currentStyle(state)).toEqual({ task: [0, 0, 0] });
    const expert = { ...state, mode: "expert" as const };
    expect(currentStyle(expert)).toEqual({ params: DEFAULT_PARAMS });
  });

  it("setTaskValue clamps and does not mutate the previous state", () => {
    const state = initialState();
    const next = setTaskValue(state, 1, 42);
    expect(next.task).toEqual([0, 10, 0]);
    expect(state.task).toEqual([0, 0, 0]);
  });

  it("setParamValue clamps to the expert range", () => {
    const next = setParamValue(initialState(), "dg", 100);
    expect(next.params.dg).toBe(2.83);
  });

  it("rejects unknown parameter names", () => {
    expect(() =>
      setParamValue(initialState(), "nope" as never, 1),
    ).toThrowError(/unknown parameter/);
  });

  it("reverts to the last server-acknowledged values after a rejection", () => {
    let state = initialState();
    state = setTaskValue(state, 0, 2);
    state = acknowledge(state);
    state = setTaskValue(state, 0, 9);
    state = revertToLastGood(state);
    expect(state.task).toEqual([2, 0, 0]);
  });

  it("revert restores expert parameters too", () => {
    let state = { ...initialState(), mode: "expert" as const };
    state = setParamValue(state, "gamma", 2.0);
    state = acknowledge(state);
    state = setParamValue(state, "gamma", 7.5);
    state = revertToLastGood(state);
    expect(state.params.gamma).toBe(2.0);
  });
});
