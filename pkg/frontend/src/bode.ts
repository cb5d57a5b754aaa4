// Bode-magnitude figures from one or more series files.
//
// Single-file / single-panel mode overlays every value column of every file
// in one log-frequency panel; grid mode lays one panel per file (used for
// the diagonal transfer-function grids).

import { Curve, Figure, PALETTE, Panel } from "./figure.js";
import { SeriesFile } from "./series.js";

export interface BodeOptions {
  labels?: string[];
  guides?: number[];
  grid?: boolean;
  width?: number;
  height?: number;
  title?: string;
}

function curvesFromFile(file: SeriesFile, startColor: number, label?: string): Curve[] {
  const [xHeader, ...valueHeaders] = file.headers;
  void xHeader;
  return valueHeaders.map((header, j) => ({
    x: file.columns[0],
    y: file.columns[j + 1],
    label: label ?? header,
    color: PALETTE[(startColor + j) % PALETTE.length],
  }));
}

export function buildBodeFigure(files: SeriesFile[], options: BodeOptions = {}): Figure {
  if (files.length === 0) {
    throw new Error("no parseable series files given");
  }
  const xLabel = files[0].headers[0];
  const width = options.width ?? (options.grid ? 900 : 760);
  const grid = options.grid ?? false;

  if (!grid) {
    const curves: Curve[] = [];
    files.forEach((file, i) => {
      const label = options.labels?.[i];
      // a single multi-column file keeps its own column names; several
      // single-column files are distinguished by their labels
      const startColor = curves.length;
      for (const c of curvesFromFile(file, startColor, files.length > 1 ? (label ?? file.path) : label)) {
        curves.push(c);
      }
    });
    const panel: Panel = {
      title: options.title,
      xLabel,
      yLabel: "magnitude [dB]",
      curves,
      guides: options.guides,
    };
    return {
      width,
      height: options.height ?? 480,
      columns: 1,
      panels: [panel],
      legend: curves.map((c) => c.label ?? ""),
    };
  }

  const columns = files.length > 1 ? 2 : 1;
  const panels: Panel[] = files.map((file, i) => ({
    title: options.labels?.[i] ?? file.headers[1],
    xLabel,
    yLabel: "magnitude [dB]",
    curves: curvesFromFile(file, 0),
    guides: options.guides,
  }));
  const rows = Math.ceil(panels.length / columns);
  return {
    width,
    height: options.height ?? 300 * rows + 20,
    columns,
    panels,
    legend: [],
  };
}
