// Paneled grid of transfer-function matrix cells from a tf-matrix output
// directory (one H_<out>_<in>.tsv file per cell).

import { readdirSync } from "node:fs";
import { join } from "node:path";
import { Figure, PALETTE, Panel } from "./figure.js";
import { SeriesFile, readSeries } from "./series.js";

export type Cell = [number, number]; // 1-based (output, input)

export const DEFAULT_CELLS: Cell[] = [
  [1, 1],
  [4, 4],
  [3, 3],
  [6, 6],
];

export class MissingCellsError extends Error {
  constructor(
    public directory: string,
    public missing: Cell[],
  ) {
    super(
      `${directory} is missing ${missing.length} cell file(s): ` +
        missing.map(([q, j]) => `H_${q}_${j}.tsv`).join(", "),
    );
    this.name = "MissingCellsError";
  }
}

export function cellFileName(cell: Cell): string {
  return `H_${cell[0]}_${cell[1]}.tsv`;
}

export function discoverCells(directory: string): Set<string> {
  return new Set(readdirSync(directory).filter((f) => /^H_[1-6]_[1-6]\.tsv$/.test(f)));
}

export interface MatrixFigureOptions {
  cells?: Cell[];
  /** overlay label per directory when several are given */
  labels?: string[];
  width?: number;
}

export function buildMatrixFigure(
  directories: string[],
  options: MatrixFigureOptions = {},
): Figure {
  const cells = options.cells ?? DEFAULT_CELLS;
  const missing: Cell[] = [];
  const perDir: Map<string, Map<string, SeriesFile>> = new Map();
  for (const dir of directories) {
    const present = discoverCells(dir);
    const loaded = new Map<string, SeriesFile>();
    for (const cell of cells) {
      const name = cellFileName(cell);
      if (!present.has(name)) {
        missing.push(cell);
      } else {
        loaded.set(name, readSeries(join(dir, name)));
      }
    }
    if (missing.length) {
      throw new MissingCellsError(dir, missing);
    }
    perDir.set(dir, loaded);
  }

  const panels: Panel[] = cells.map(([q, j]) => {
    const curves = directories.map((dir, i) => {
      const file = perDir.get(dir)!.get(cellFileName([q, j]))!;
      return {
        x: file.columns[0],
        y: file.columns[1],
        label: options.labels?.[i] ?? dir,
        color: PALETTE[i % PALETTE.length],
      };
    });
    return {
      title: `H_${q},${j}`,
      xLabel: "frequency [Hz]",
      yLabel: "magnitude [dB]",
      curves,
    };
  });

  const columns = 2;
  const rows = Math.ceil(panels.length / columns);
  return {
    width: options.width ?? 900,
    height: 280 * rows + (directories.length > 1 ? 24 : 0),
    columns,
    panels,
    legend: directories.length > 1 ? directories.map((d, i) => options.labels?.[i] ?? d) : [],
  };
}
