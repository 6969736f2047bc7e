import { describe, expect, it } from "vitest";

import type { ApiClient, StepResult, TraceEntry } from "../src/api.js";
import { bestErrorCurve } from "../src/curves.js";
import { SearchPanel, initialPanel, stepButtonEnabled } from "../src/search.js";

/** Scripted server: a fixed evaluation sequence, finished after the last. */
function fakeApi(errors: number[]): ApiClient {
  let evaluations = 0;
  const impl = {
    async searchStart(): Promise<string> {
      evaluations = 0;
      return "session-1";
    },
    async searchStep(_session: string, n: number): Promise<StepResult> {
      const delta: TraceEntry[] = [];
      let best = Math.min(Infinity, ...errors.slice(0, evaluations));
      for (let i = 0; i < n && evaluations < errors.length; i++) {
        const error = errors[evaluations++];
        const improved = error < best;
        best = Math.min(best, error);
        delta.push({ t: [evaluations, 0, 0], error, improved });
      }
      return {
        state: {
          t: [evaluations, 0, 0],
          best_t: [1, 0, 0],
          best_error: best,
          evaluations,
          finished: evaluations >= errors.length,
        },
        trace_delta: delta,
      };
    },
  };
  return impl as unknown as ApiClient;
}

const spec = {
  imageId: "img",
  referenceId: "ref",
  tInit: [0, 0, 0],
  s: 0.1,
  K: 3,
};

describe("SearchPanel", () => {
  it("starts idle with the step control disabled", () => {
    expect(stepButtonEnabled(initialPanel())).toBe(false);
  });

  it("start enables stepping", async () => {
    const panel = new SearchPanel(fakeApi([3, 2, 1]));
    await panel.start(spec);
    expect(panel.panel.phase).toBe("ready");
    expect(stepButtonEnabled(panel.panel)).toBe(true);
  });

  it("accumulates the trace across steps", async () => {
    const panel = new SearchPanel(fakeApi([5, 4, 6, 3, 7]));
    await panel.start(spec);
    await panel.step(2);
    expect(panel.panel.errors).toEqual([5, 4]);
    await panel.step(2);
    expect(panel.panel.errors).toEqual([5, 4, 6, 3]);
    expect(panel.panel.state?.evaluations).toBe(4);
  });

  it("best-so-far error curve is monotone non-increasing", async () => {
    const panel = new SearchPanel(fakeApi([5, 7, 3, 9, 2]));
    await panel.start(spec);
    await panel.runToCompletion(2);
    const best = bestErrorCurve(panel.panel.errors);
    for (let i = 1; i < best.length; i++) {
      expect(best[i]).toBeLessThanOrEqual(best[i - 1]);
    }
    expect(best[best.length - 1]).toBe(2);
  });

  it("disables stepping once the server reports termination", async () => {
    const panel = new SearchPanel(fakeApi([2, 1]));
    await panel.start(spec);
    await panel.step(10);
    expect(panel.panel.phase).toBe("finished");
    expect(stepButtonEnabled(panel.panel)).toBe(false);
  });

  it("step after termination is a no-op", async () => {
    const panel = new SearchPanel(fakeApi([2, 1]));
    await panel.start(spec);
    await panel.step(10);
    const before = panel.panel;
    await panel.step(1);
    expect(panel.panel).toBe(before);
  });

  it("reset returns to idle so a new search can start", async () => {
    const panel = new SearchPanel(fakeApi([1]));
    await panel.start(spec);
    await panel.step(1);
    panel.reset();
    expect(panel.panel).toEqual(initialPanel());
    await panel.start(spec);
    expect(stepButtonEnabled(panel.panel)).toBe(true);
  });

  it("notifies the listener on every state change", async () => {
    const phases: string[] = [];
    const panel = new SearchPanel(fakeApi([2, 1]), (p) => phases.push(p.phase));
    await panel.start(spec);
    await panel.step(10);
    expect(phases).toEqual(["ready", "running", "finished"]);
  });
});
