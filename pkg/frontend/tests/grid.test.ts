import { describe, expect, it } from "vitest";

import { gridCells, validateGridSpec, type GridSpec } from "../src/grid.js";

const base: GridSpec = {
  xValues: [0, 3, 6, 9],
  yValues: [0, 3, 6],
  xDim: 1,
  yDim: 2,
  base: [3, 0, 0],
};

describe("validateGridSpec", () => {
  it("accepts up to 4 values per axis", () => {
    expect(() => validateGridSpec(base)).not.toThrow();
  });

  it("rejects more than 4 values per axis", () => {
    expect(() =>
      validateGridSpec({ ...base, xValues: [0, 1, 2, 3, 4] }),
    ).toThrowError(/limited to 4/);
  });

  it("rejects empty axes", () => {
    expect(() => validateGridSpec({ ...base, yValues: [] })).toThrowError(
      /at least one/,
    );
  });

  it("rejects two axes on the same dimension", () => {
    expect(() => validateGridSpec({ ...base, yDim: 1 })).toThrowError(
      /different task dimensions/,
    );
  });

  it("rejects out-of-range dimensions", () => {
    expect(() => validateGridSpec({ ...base, yDim: 5 })).toThrowError(
      /out of range/,
    );
  });
});

describe("gridCells", () => {
  it("produces row-major cells over both axes with a fixed base", () => {
    const cells = gridCells(base);
    expect(cells).toHaveLength(12);
    expect(cells[0]).toEqual({ row: 0, col: 0, task: [3, 0, 0], label: "(3,0,0)" });
    expect(cells[3].task).toEqual([3, 9, 0]);
    expect(cells[11].task).toEqual([3, 9, 6]);
    for (const cell of cells) expect(cell.task[0]).toBe(3); // base untouched
  });

  it("labels each cell with its full task vector", () => {
    for (const cell of gridCells(base)) {
      expect(cell.label).toBe(`(${cell.task.join(",")})`);
    }
  });

  it("a 1x1 grid is a single preview", () => {
    const cells = gridCells({ ...base, xValues: [5], yValues: [7] });
    expect(cells).toEqual([
      { row: 0, col: 0, task: [3, 5, 7], label: "(3,5,7)" },
    ]);
  });

  it("cell task vectors do not depend on any image", () => {
    // gridCells is a pure function of the spec alone
    expect(gridCells(base)).toEqual(gridCells({ ...base }));
  });
});
