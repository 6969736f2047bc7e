/** Typed client for the enhancement service's /v1 JSON+PNG API. */

export interface ParamsDict {
  dg: number;
  wb_r: number;
  wb_b: number;
  ccm_11: number;
  ccm_12: number;
  ccm_13: number;
  ccm_21: number;
  ccm_22: number;
  ccm_23: number;
  ccm_31: number;
  ccm_32: number;
  ccm_33: number;
  offset_1: number;
  offset_2: number;
  offset_3: number;
  gamma: number;
  tone_s: number;
  tone_p1: number;
  tone_p2: number;
  format_version?: number;
}

export interface RenderResult {
  png: Blob;
  params: ParamsDict;
  flopsPerPixel: number;
}

export interface CurveSamples {
  x: number[];
  gamma: number[];
  tone: number[];
  ccm_r: number[];
  ccm_g: number[];
  ccm_b: number[];
}

export interface SearchState {
  t: number[];
  best_t: number[];
  best_error: number;
  evaluations: number;
  finished: boolean;
}

export interface TraceEntry {
  t: number[];
  error: number;
  improved: boolean;
}

export interface StepResult {
  state: SearchState;
  trace_delta: TraceEntry[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(`${this.baseUrl}/v1${path}`, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body: keep statusText */
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  private async postJson(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async uploadImage(png: Blob | ArrayBuffer): Promise<string> {
    const resp = await this.request("/images", {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png,
    });
    return (await resp.json()).image_id as string;
  }

  async render(
    imageId: string,
    style: { task: number[] } | { params: ParamsDict },
  ): Promise<RenderResult> {
    const resp = await this.postJson("/render", { image_id: imageId, ...style });
    return {
      png: await resp.blob(),
      params: JSON.parse(resp.headers.get("X-Params") ?? "{}") as ParamsDict,
      flopsPerPixel: Number(resp.headers.get("X-Flops-Per-Pixel") ?? "0"),
    };
  }

  async curves(
    style: { task: number[] } | { params: ParamsDict | "init" },
    n: number,
  ): Promise<CurveSamples> {
    const query = new URLSearchParams({ n: String(n) });
    if ("task" in style) {
      query.set("task", style.task.join(","));
    } else {
      query.set(
        "params",
        style.params === "init" ? "init" : JSON.stringify(style.params),
      );
    }
    const resp = await this.request(`/curves?${query.toString()}`);
    return (await resp.json()) as CurveSamples;
  }

  async searchStart(spec: {
    imageId: string;
    referenceId: string;
    tInit: number[];
    s: number;
    K: number;
  }): Promise<string> {
    const resp = await this.postJson("/search/start", {
      image_id: spec.imageId,
      reference_id: spec.referenceId,
      t_init: spec.tInit,
      s: spec.s,
      K: spec.K,
    });
    return (await resp.json()).session as string;
  }

  async searchStep(session: string, n: number): Promise<StepResult> {
    const resp = await this.postJson("/search/step", { session, n });
    return (await resp.json()) as StepResult;
  }
}
