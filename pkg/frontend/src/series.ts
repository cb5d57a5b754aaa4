// Parser for the TSV series files emitted by the hexiso CLI.
//
// Schema: line 1 is a '#'-prefixed header naming every column and its unit,
// tab-separated; every following line holds one tab-separated row of decimal
// numbers (scientific notation allowed), '\n' line endings, UTF-8.

import { readFileSync } from "node:fs";

export interface SeriesFile {
  path: string;
  headers: string[];
  /** column-major data: columns[j][i] is row i of column j */
  columns: number[][];
  rows: number;
}

export class SeriesFormatError extends Error {
  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "SeriesFormatError";
  }
}

export function parseSeriesText(text: string, path = "<string>"): SeriesFile {
  const lines = text.split("\n");
  if (lines.length === 0 || !lines[0].startsWith("#")) {
    throw new SeriesFormatError(path, "missing '#'-prefixed header line");
  }
  const headers = lines[0]
    .slice(1)
    .trim()
    .split("\t")
    .map((h) => h.trim());
  if (headers.length === 0 || headers.some((h) => h.length === 0)) {
    throw new SeriesFormatError(path, "empty column name in header");
  }
  const columns: number[][] = headers.map(() => []);
  let rows = 0;
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === "") continue; // trailing newline
    const parts = line.split("\t");
    if (parts.length !== headers.length) {
      throw new SeriesFormatError(
        path,
        `row ${i} has ${parts.length} fields, header names ${headers.length} columns`,
      );
    }
    for (let j = 0; j < parts.length; j++) {
      const value = Number(parts[j]);
      if (parts[j].trim() === "" || Number.isNaN(value)) {
        throw new SeriesFormatError(path, `row ${i}, column ${j + 1}: not a number: '${parts[j]}'`);
      }
      columns[j].push(value);
    }
    rows++;
  }
  return { path, headers, columns, rows };
}

export function readSeries(path: string): SeriesFile {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SeriesFormatError(path, `cannot read file: ${(err as Error).message}`);
  }
  return parseSeriesText(text, path);
}
