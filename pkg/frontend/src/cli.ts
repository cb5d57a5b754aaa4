#!/usr/bin/env node
// plotkit: render Bode-magnitude figures and TF-matrix grids from hexiso
// TSV output. Purely a reader: it never recomputes physics.
//
//   plotkit bode <series.tsv ...> --out fig.svg [--labels a,b,..] [--guides -20,-40] [--grid]
//   plotkit matrix <tf-matrix-dir ...> --out fig.png [--cells 1,1 3,3 ...] [--labels a,b]

import { writeFileSync } from "node:fs";
import { extname } from "node:path";
import { buildBodeFigure } from "./bode.js";
import { Figure } from "./figure.js";
import { Cell, buildMatrixFigure } from "./matrix.js";
import { renderPng } from "./png.js";
import { readSeries } from "./series.js";
import { renderSvg } from "./svg.js";

interface Parsed {
  positional: string[];
  options: Map<string, string[]>;
}

function parseArgs(argv: string[]): Parsed {
  const positional: string[] = [];
  const options = new Map<string, string[]>();
  let current: string | null = null;
  for (const arg of argv) {
    if (arg.startsWith("--")) {
      current = arg.slice(2);
      if (!options.has(current)) options.set(current, []);
    } else if (current !== null) {
      options.get(current)!.push(arg);
    } else {
      positional.push(arg);
    }
  }
  return { positional, options };
}

function single(parsed: Parsed, name: string): string | undefined {
  const values = parsed.options.get(name);
  return values?.[values.length - 1];
}

export function writeFigure(fig: Figure, outPath: string): void {
  const ext = extname(outPath).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(outPath, renderSvg(fig), "utf-8");
  } else if (ext === ".png") {
    writeFileSync(outPath, renderPng(fig));
  } else {
    throw new Error(`unsupported image extension '${ext}' (use .svg or .png)`);
  }
}

const USAGE = `usage:
  plotkit bode <series.tsv ...> --out fig.svg [--labels a,b] [--guides -20,-40] [--grid]
  plotkit matrix <tf-matrix-dir ...> --out fig.svg [--cells 1,1 4,4] [--labels a,b]`;

export function run(argv: string[]): number {
  const [command, ...rest] = argv;
  if (!command || command === "--help") {
    console.log(USAGE);
    return command ? 0 : 2;
  }
  const parsed = parseArgs(rest);
  const out = single(parsed, "out");
  if (!out) {
    console.error("error: --out <image path> is required");
    return 2;
  }
  const labels = single(parsed, "labels")?.split(",");

  try {
    if (command === "bode") {
      if (parsed.positional.length === 0) {
        console.error("error: no input series files");
        return 2;
      }
      const files = parsed.positional.map((p) => readSeries(p));
      const guides = single(parsed, "guides")
        ?.split(",")
        .map((v) => Number(v));
      const fig = buildBodeFigure(files, {
        labels,
        guides,
        grid: parsed.options.has("grid"),
        title: single(parsed, "title"),
      });
      writeFigure(fig, out);
    } else if (command === "matrix") {
      if (parsed.positional.length === 0) {
        console.error("error: no tf-matrix directories");
        return 2;
      }
      const cells = parsed.options
        .get("cells")
        ?.map((c) => c.split(",").map(Number) as Cell);
      const fig = buildMatrixFigure(parsed.positional, { cells, labels });
      writeFigure(fig, out);
    } else {
      console.error(`error: unknown command '${command}'\n${USAGE}`);
      return 2;
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${out}`);
  return 0;
}

if (process.argv[1] && /cli\.[jt]s$/.test(process.argv[1])) {
  process.exit(run(process.argv.slice(2)));
}
