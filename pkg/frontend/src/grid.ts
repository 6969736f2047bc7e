/** Style-grid explorer: a small grid of renders over two task axes. */

export const MAX_GRID_AXIS = 4;

export interface GridSpec {
  /** values for the horizontal axis */
  xValues: number[];
  /** values for the vertical axis */
  yValues: number[];
  /** which task dimension each axis drives */
  xDim: number;
  yDim: number;
  /** base task vector supplying the remaining dimensions */
  base: number[];
}

export interface GridCell {
  row: number;
  col: number;
  task: number[];
  label: string;
}

export function validateGridSpec(spec: GridSpec): void {
  if (spec.xValues.length < 1 || spec.yValues.length < 1) {
    throw new Error("grid axes need at least one value");
  }
  if (spec.xValues.length > MAX_GRID_AXIS || spec.yValues.length > MAX_GRID_AXIS) {
    throw new Error(`grid axes are limited to ${MAX_GRID_AXIS} values`);
  }
  if (spec.xDim === spec.yDim) {
    throw new Error("grid axes must drive different task dimensions");
  }
  for (const dim of [spec.xDim, spec.yDim]) {
    if (dim < 0 || dim >= spec.base.length) {
      throw new Error(`axis dimension ${dim} out of range`);
    }
  }
}

/** Expand the spec into row-major cells, each labeled with its task vector. */
export function gridCells(spec: GridSpec): GridCell[] {
  validateGridSpec(spec);
  const cells: GridCell[] = [];
  spec.yValues.forEach((y, row) => {
    spec.xValues.forEach((x, col) => {
      const task = [...spec.base];
      task[spec.xDim] = x;
      task[spec.yDim] = y;
      cells.push({ row, col, task, label: `(${task.join(",")})` });
    });
  });
  return cells;
}
