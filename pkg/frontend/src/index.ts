export { SeriesFile, SeriesFormatError, parseSeriesText, readSeries } from "./series.js";
export { Curve, Figure, Panel, PALETTE } from "./figure.js";
export { renderSvg } from "./svg.js";
export { renderPng } from "./png.js";
export { BodeOptions, buildBodeFigure } from "./bode.js";
export { Cell, DEFAULT_CELLS, MissingCellsError, buildMatrixFigure, discoverCells } from "./matrix.js";
export { run, writeFigure } from "./cli.js";
