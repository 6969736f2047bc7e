/** Guided-search panel: drives the server's resumable coordinate search. */

import type { ApiClient, SearchState, TraceEntry } from "./api.js";

export type PanelPhase = "idle" | "ready" | "running" | "finished";

export interface PanelState {
  phase: PanelPhase;
  session: string | null;
  state: SearchState | null;
  /** raw per-evaluation errors, in evaluation order */
  errors: number[];
  trace: TraceEntry[];
}

export function initialPanel(): PanelState {
  return { phase: "idle", session: null, state: null, errors: [], trace: [] };
}

export function stepButtonEnabled(panel: PanelState): boolean {
  return panel.phase === "ready" || panel.phase === "running";
}

export class SearchPanel {
  panel: PanelState = initialPanel();

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (panel: PanelState) => void = () => {},
  ) {}

  private update(next: PanelState): void {
    this.panel = next;
    this.onChange(next);
  }

  async start(spec: {
    imageId: string;
    referenceId: string;
    tInit: number[];
    s: number;
    K: number;
  }): Promise<void> {
    const session = await this.api.searchStart(spec);
    this.update({ ...initialPanel(), phase: "ready", session });
  }

  /** Advance the search by n evaluations; no-op unless startable. */
  async step(n: number): Promise<void> {
    if (!stepButtonEnabled(this.panel) || this.panel.session === null) return;
    this.update({ ...this.panel, phase: "running" });
    const result = await this.api.searchStep(this.panel.session, n);
    const trace = [...this.panel.trace, ...result.trace_delta];
    this.update({
      ...this.panel,
      phase: result.state.finished ? "finished" : "running",
      state: result.state,
      errors: trace.map((e) => e.error),
      trace,
    });
  }

  /** Run until the server reports termination. */
  async runToCompletion(batch = 10): Promise<void> {
    while (stepButtonEnabled(this.panel)) {
      await this.step(batch);
    }
  }

  reset(): void {
    this.update(initialPanel());
  }
}
