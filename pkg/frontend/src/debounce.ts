/** Debounced latest-wins scheduling for preview renders.
 *
 * Guarantees: at most one scheduled call per debounce window, and results are
 * delivered only if no newer request has been issued since (stale responses
 * are dropped by sequence number).
 */

export interface Scheduler {
  setTimeout(fn: () => void, ms: number): number;
  clearTimeout(id: number): void;
}

const realScheduler: Scheduler = {
  setTimeout: (fn, ms) => setTimeout(fn, ms) as unknown as number,
  clearTimeout: (id) => clearTimeout(id),
};

export class LatestOnly<TArgs, TResult> {
  private seq = 0;
  private timer: number | null = null;
  private pendingArgs: TArgs | null = null;

  constructor(
    private readonly run: (args: TArgs) => Promise<TResult>,
    private readonly deliver: (result: TResult, args: TArgs) => void,
    private readonly onError: (err: unknown, args: TArgs) => void,
    private readonly debounceMs: number,
    private readonly scheduler: Scheduler = realScheduler,
  ) {}

  /** Record a new desired state; fires after the debounce window. */
  request(args: TArgs): void {
    this.pendingArgs = args;
    if (this.timer !== null) this.scheduler.clearTimeout(this.timer);
    this.timer = this.scheduler.setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.debounceMs);
  }

  /** Bypass the debounce window (e.g. on slider release). */
  flush(): void {
    if (this.timer !== null) {
      this.scheduler.clearTimeout(this.timer);
      this.timer = null;
    }
    if (this.pendingArgs !== null) this.fire();
  }

  private fire(): void {
    const args = this.pendingArgs as TArgs;
    this.pendingArgs = null;
    const ticket = ++this.seq;
    this.run(args).then(
      (result) => {
        if (ticket === this.seq) this.deliver(result, args);
      },
      (err) => {
        if (ticket === this.seq) this.onError(err, args);
      },
    );
  }
}
