/** DOM wiring: sliders, preview, curve charts, style grid, search panel.
 *
 * All pixels shown come from the service; nothing is rendered client-side.
 */

import { ApiClient, ApiError, type ParamsDict } from "./api.js";
import { bestErrorCurve, curveSeries, toPixelSpace } from "./curves.js";
import { LatestOnly } from "./debounce.js";
import { gridCells, type GridSpec } from "./grid.js";
import { SearchPanel, stepButtonEnabled } from "./search.js";
import {
  EXPERT_SLIDERS,
  TASK_SLIDERS,
  acknowledge,
  currentStyle,
  initialState,
  revertToLastGood,
  setParamValue,
  setTaskValue,
  type Mode,
  type UiState,
} from "./state.js";

const DEBOUNCE_MS = 120;

const api = new ApiClient("");
let state: UiState = initialState();
let referenceId: string | null = null;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function toast(message: string): void {
  const el = $("toast");
  el.textContent = message;
  el.classList.add("visible");
  setTimeout(() => el.classList.remove("visible"), 3000);
}

// ---------------------------------------------------------------- preview

const preview = new LatestOnly(
  (style: ReturnType<typeof currentStyle>) => {
    if (state.imageId === null) return Promise.reject(new Error("no image"));
    return api.render(state.imageId, style);
  },
  (result) => {
    const img = $("preview") as HTMLImageElement;
    URL.revokeObjectURL(img.src);
    img.src = URL.createObjectURL(result.png);
    $("flops").textContent = `${result.flopsPerPixel} ops/pixel`;
    state = acknowledge(state);
    void refreshCurves(result.params);
  },
  (err) => {
    if (err instanceof ApiError && err.status === 422) {
      state = revertToLastGood(state);
      renderSliders();
      toast(`rejected: ${err.message}`);
    } else {
      toast(`render failed: ${err instanceof Error ? err.message : err}`);
    }
  },
  DEBOUNCE_MS,
);

function requestPreview(): void {
  if (state.imageId !== null) preview.request(currentStyle(state));
}

// ---------------------------------------------------------------- sliders

function sliderRow(
  name: string,
  min: number,
  max: number,
  step: number,
  value: number,
  onInput: (v: number) => void,
): HTMLElement {
  const row = document.createElement("label");
  row.className = "slider-row";
  const text = document.createElement("span");
  text.textContent = name;
  const input = document.createElement("input");
  input.type = "range";
  Object.assign(input, { min: String(min), max: String(max), step: String(step) });
  input.value = String(value);
  const readout = document.createElement("output");
  readout.textContent = value.toFixed(2);
  input.addEventListener("input", () => {
    readout.textContent = Number(input.value).toFixed(2);
    onInput(Number(input.value));
  });
  row.append(text, input, readout);
  return row;
}

function renderSliders(): void {
  const host = $("sliders");
  host.replaceChildren();
  if (state.mode === "task") {
    TASK_SLIDERS.forEach((spec, dim) => {
      host.append(
        sliderRow(spec.name, spec.min, spec.max, spec.step, state.task[dim], (v) => {
          state = setTaskValue(state, dim, v);
          requestPreview();
        }),
      );
    });
  } else {
    EXPERT_SLIDERS.forEach((spec) => {
      const key = spec.name as keyof ParamsDict;
      host.append(
        sliderRow(
          spec.name,
          spec.min,
          spec.max,
          spec.step,
          state.params[key] as number,
          (v) => {
            state = setParamValue(state, key, v);
            requestPreview();
          },
        ),
      );
    });
  }
}

// ---------------------------------------------------------------- curves

async function refreshCurves(params: ParamsDict): Promise<void> {
  try {
    const samples = await api.curves({ params }, 64);
    const canvas = $("curves") as HTMLCanvasElement;
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const series of curveSeries(samples)) {
      ctx.strokeStyle = series.color;
      ctx.beginPath();
      toPixelSpace(series.points, canvas.width, canvas.height).forEach((p, i) =>
        i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y),
      );
      ctx.stroke();
    }
  } catch {
    /* fetch failure: keep the last chart */
  }
}

// ---------------------------------------------------------------- grid

async function renderGrid(): Promise<void> {
  if (state.imageId === null) return;
  const values = (id: string): number[] =>
    ($( id) as HTMLInputElement).value.split(",").map(Number);
  const spec: GridSpec = {
    xValues: values("grid-x"),
    yValues: values("grid-y"),
    xDim: 1,
    yDim: 2,
    base: [...state.task],
  };
  let cells;
  try {
    cells = gridCells(spec);
  } catch (err) {
    toast(err instanceof Error ? err.message : String(err));
    return;
  }
  const host = $("grid");
  host.style.gridTemplateColumns = `repeat(${spec.xValues.length}, 1fr)`;
  host.replaceChildren();
  await Promise.all(
    cells.map(async (cell) => {
      const figure = document.createElement("figure");
      const img = document.createElement("img");
      const caption = document.createElement("figcaption");
      caption.textContent = cell.label;
      figure.append(img, caption);
      host.append(figure);
      try {
        const result = await api.render(state.imageId as string, { task: cell.task });
        img.src = URL.createObjectURL(result.png);
        img.title = JSON.stringify(result.params);
      } catch {
        figure.classList.add("failed");
        caption.textContent = `${cell.label} (failed)`;
      }
    }),
  );
}

// ---------------------------------------------------------------- search

const panel = new SearchPanel(api, (p) => {
  ($("search-step") as HTMLButtonElement).disabled = !stepButtonEnabled(p);
  ($("search-status") as HTMLElement).textContent =
    p.state === null
      ? p.phase
      : `${p.phase}: ${p.state.evaluations} renders, best ` +
        `t=(${p.state.best_t.map((v) => v.toFixed(2)).join(",")}) ` +
        `err=${p.state.best_error.toExponential(3)}`;
  drawErrorCurve(bestErrorCurve(p.errors));
  if (p.state !== null && state.imageId !== null) {
    void api
      .render(state.imageId, { task: p.state.best_t })
      .then((r) => (($("search-best") as HTMLImageElement).src = URL.createObjectURL(r.png)))
      .catch(() => toast("best-style render failed"));
  }
});

function drawErrorCurve(best: number[]): void {
  const canvas = $("search-curve") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx || best.length === 0) return;
  const max = best[0] || 1;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#ee6666";
  ctx.beginPath();
  const pts = best.map((e, i) => ({
    x: best.length > 1 ? i / (best.length - 1) : 0,
    y: max > 0 ? e / max : 0,
  }));
  toPixelSpace(pts, canvas.width, canvas.height).forEach((p, i) =>
    i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y),
  );
  ctx.stroke();
}

// ---------------------------------------------------------------- wiring

async function uploadFile(file: File): Promise<string | null> {
  try {
    return await api.uploadImage(await file.arrayBuffer());
  } catch (err) {
    toast(`upload failed: ${err instanceof Error ? err.message : err}`);
    return null;
  }
}

export function init(): void {
  ($("file") as HTMLInputElement).addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    const id = await uploadFile(file);
    if (id !== null) {
      state = { ...state, imageId: id };
      requestPreview();
    }
  });

  ($("reference") as HTMLInputElement).addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    referenceId = await uploadFile(file);
  });

  for (const mode of ["task", "expert"] as Mode[]) {
    $(`mode-${mode}`).addEventListener("click", () => {
      state = { ...state, mode };
      renderSliders();
      requestPreview();
    });
  }

  $("grid-go").addEventListener("click", () => void renderGrid());

  $("search-start").addEventListener("click", async () => {
    if (state.imageId === null || referenceId === null) {
      toast("upload an input and a reference first");
      return;
    }
    try {
      await panel.start({
        imageId: state.imageId,
        referenceId,
        tInit: [0, 0, 0],
        s: Number(($("search-s") as HTMLInputElement).value),
        K: Number(($("search-k") as HTMLInputElement).value),
      });
    } catch (err) {
      toast(`search start failed: ${err instanceof Error ? err.message : err}`);
    }
  });
  $("search-step").addEventListener("click", () => void panel.step(5));
  $("search-reset").addEventListener("click", () => panel.reset());

  renderSliders();
}

if (typeof document !== "undefined" && document.getElementById("sliders")) {
  init();
}
