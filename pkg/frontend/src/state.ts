/** UI state: slider definitions, mode handling, and last-good reverts. */

import type { ParamsDict } from "./api.js";

export type Mode = "task" | "expert";

export interface SliderSpec {
  name: string;
  min: number;
  max: number;
  step: number;
}

export const TASK_DIM = 3;

/** Task axes cover the 0–9 style grid plus search headroom. */
export const TASK_SLIDERS: SliderSpec[] = Array.from(
  { length: TASK_DIM },
  (_, i) => ({ name: `t${i + 1}`, min: -1, max: 10, step: 0.1 }),
);

/** Direct parameter editing; ranges are the fit box bounds. */
export const EXPERT_SLIDERS: SliderSpec[] = [
  { name: "dg", min: 0.19, max: 2.83, step: 0.01 },
  { name: "wb_r", min: 0.56, max: 1.24, step: 0.01 },
  { name: "wb_b", min: 0.05, max: 3.22, step: 0.01 },
  ...["11", "12", "13", "21", "22", "23", "31", "32", "33"].map((ij) => ({
    name: `ccm_${ij}`,
    min: -2,
    max: 2,
    step: 0.01,
  })),
  ...["1", "2", "3"].map((i) => ({
    name: `offset_${i}`,
    min: -0.5,
    max: 0.5,
    step: 0.01,
  })),
  { name: "gamma", min: 0.1, max: 8, step: 0.01 },
  { name: "tone_s", min: -8, max: 8, step: 0.05 },
  { name: "tone_p1", min: 0.1, max: 8, step: 0.05 },
  { name: "tone_p2", min: 0.1, max: 8, step: 0.05 },
];

export const DEFAULT_PARAMS: ParamsDict = {
  dg: 1.2,
  wb_r: 1,
  wb_b: 1,
  ccm_11: 1,
  ccm_12: 0,
  ccm_13: 0,
  ccm_21: 0,
  ccm_22: 1,
  ccm_23: 0,
  ccm_31: 0,
  ccm_32: 0,
  ccm_33: 1,
  offset_1: 0,
  offset_2: 0,
  offset_3: 0,
  gamma: 1 / 2.2,
  tone_s: 3,
  tone_p1: 2,
  tone_p2: 3,
};

export function clampToRange(spec: SliderSpec, value: number): number {
  return Math.min(spec.max, Math.max(spec.min, value));
}

export interface UiState {
  imageId: string | null;
  mode: Mode;
  task: number[];
  params: ParamsDict;
  /** last slider state acknowledged by the server, for 422 reverts */
  lastGoodTask: number[];
  lastGoodParams: ParamsDict;
}

export function initialState(): UiState {
  return {
    imageId: null,
    mode: "task",
    task: new Array(TASK_DIM).fill(0),
    params: { ...DEFAULT_PARAMS },
    lastGoodTask: new Array(TASK_DIM).fill(0),
    lastGoodParams: { ...DEFAULT_PARAMS },
  };
}

/** The render-request body for the current mode; exactly one style source. */
export function currentStyle(
  state: UiState,
): { task: number[] } | { params: ParamsDict } {
  return state.mode === "task"
    ? { task: [...state.task] }
    : { params: { ...state.params } };
}

export function setTaskValue(state: UiState, dim: number, value: number): UiState {
  const task = [...state.task];
  task[dim] = clampToRange(TASK_SLIDERS[dim], value);
  return { ...state, task };
}

export function setParamValue(
  state: UiState,
  name: keyof ParamsDict,
  value: number,
): UiState {
  const spec = EXPERT_SLIDERS.find((s) => s.name === name);
  if (!spec) throw new Error(`unknown parameter ${String(name)}`);
  return { ...state, params: { ...state.params, [name]: clampToRange(spec, value) } };
}

/** The server accepted the current style: remember it as last-good. */
export function acknowledge(state: UiState): UiState {
  return {
    ...state,
    lastGoodTask: [...state.task],
    lastGoodParams: { ...state.params },
  };
}

/** The server rejected the current style (422): revert the sliders. */
export function revertToLastGood(state: UiState): UiState {
  return {
    ...state,
    task: [...state.lastGoodTask],
    params: { ...state.lastGoodParams },
  };
}
