// Minimal PNG back end: rasterizes the figure model with 1px lines and a
// 5x7 bitmap font, encoded with node's built-in zlib. Good enough for
// quick-look raster output; the SVG back end is the high-quality path.

import { deflateSync } from "node:zlib";
import {
  Figure,
  Panel,
  guideLine,
  linearTicks,
  logTicks,
  panelExtent,
} from "./figure.js";

const MARGIN = { left: 58, right: 14, top: 26, bottom: 44 };
const LEGEND_H = 22;

class Raster {
  data: Uint8Array;
  constructor(
    public width: number,
    public height: number,
  ) {
    this.data = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const k = (y * this.width + x) * 3;
    this.data[k] = rgb[0];
    this.data[k + 1] = rgb[1];
    this.data[k + 2] = rgb[2];
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number], dash = false): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1) | 0;
    for (let i = 0; i <= steps; i++) {
      if (dash && i % 8 >= 5) continue;
      const t = i / steps;
      this.set(x0 + t * (x1 - x0), y0 + t * (y1 - y0), rgb);
    }
  }

  text(x: number, y: number, s: string, rgb: [number, number, number]): void {
    let cx = Math.round(x);
    for (const ch of s) {
      const glyph = FONT[ch.toUpperCase()] ?? FONT["?"];
      for (let row = 0; row < 7; row++) {
        const bits = glyph[row];
        for (let col = 0; col < 5; col++) {
          if (bits & (1 << (4 - col))) this.set(cx + col, y + row, rgb);
        }
      }
      cx += 6;
    }
  }
}

function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

export function renderPng(fig: Figure): Buffer {
  const img = new Raster(fig.width, fig.height);
  const rows = Math.ceil(fig.panels.length / fig.columns);
  const panelW = fig.width / fig.columns;
  const panelH = (fig.height - (fig.legend.length ? LEGEND_H : 0)) / rows;
  fig.panels.forEach((panel, i) => {
    const px = (i % fig.columns) * panelW;
    const py = Math.floor(i / fig.columns) * panelH;
    rasterPanel(img, panel, px, py, panelW, panelH);
  });
  if (fig.legend.length) {
    const colors = fig.panels[0]?.curves.map((c) => c.color) ?? [];
    let x = MARGIN.left;
    const y = fig.height - 14;
    fig.legend.forEach((label, i) => {
      const rgb = hexToRgb(colors[i % colors.length] ?? "#444444");
      img.line(x, y + 3, x + 20, y + 3, rgb);
      img.text(x + 25, y, label, [0, 0, 0]);
      x += 32 + 6 * label.length;
    });
  }
  return encodePng(img);
}

function rasterPanel(img: Raster, panel: Panel, px: number, py: number, w: number, h: number): void {
  const extent = panelExtent(panel);
  const x0 = px + MARGIN.left;
  const y0 = py + MARGIN.top;
  const plotW = w - MARGIN.left - MARGIN.right;
  const plotH = h - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    x0 + (plotW * Math.log10(x / extent.xLo)) / Math.log10(extent.xHi / extent.xLo);
  const sy = (y: number) => y0 + plotH * (1 - (y - extent.yLo) / (extent.yHi - extent.yLo));
  const black: [number, number, number] = [0, 0, 0];
  const grey: [number, number, number] = [215, 215, 215];

  for (const t of logTicks(extent.xLo, extent.xHi)) {
    const X = sx(t.value);
    img.line(X, y0, X, y0 + plotH, grey);
    img.text(X - 3 * t.label.length, y0 + plotH + 6, t.label, black);
  }
  for (const t of linearTicks(extent.yLo, extent.yHi)) {
    const Y = sy(t.value);
    img.line(x0, Y, x0 + plotW, Y, grey);
    img.text(x0 - 6 * t.label.length - 6, Y - 3, t.label, black);
  }
  img.line(x0, y0, x0 + plotW, y0, black);
  img.line(x0, y0 + plotH, x0 + plotW, y0 + plotH, black);
  img.line(x0, y0, x0, y0 + plotH, black);
  img.line(x0 + plotW, y0, x0 + plotW, y0 + plotH, black);

  const curves = [...panel.curves];
  for (const g of panel.guides ?? []) {
    curves.push(guideLine(extent, g));
  }
  for (const c of curves) {
    const rgb = hexToRgb(c.color);
    let prev: [number, number] | null = null;
    for (let i = 0; i < c.x.length; i++) {
      if (!(c.x[i] > 0) || !Number.isFinite(c.y[i])) {
        prev = null;
        continue;
      }
      const X = sx(c.x[i]);
      const Y = Math.min(Math.max(sy(c.y[i]), y0), y0 + plotH);
      if (prev) img.line(prev[0], prev[1], X, Y, rgb, c.dash);
      prev = [X, Y];
    }
  }
  if (panel.title) {
    img.text(x0 + plotW - 6 * panel.title.length - 4, y0 + 4, panel.title, black);
  }
  img.text(x0 + plotW / 2 - 3 * panel.xLabel.length, py + h - 24, panel.xLabel, black);
  img.text(px + 4, y0 - 16, panel.yLabel, black);
}

// -- PNG container -------------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(data)]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(data), crc]);
}

function encodePng(img: Raster): Buffer {
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(img.width, 0);
  ihdr.writeUInt32BE(img.height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // truecolour
  const stride = img.width * 3;
  const raw = Buffer.alloc((stride + 1) * img.height);
  for (let y = 0; y < img.height; y++) {
    raw[y * (stride + 1)] = 0; // no filter
    raw.set(img.data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// 5x7 font for the characters the figures actually use
const FONT: Record<string, number[]> = {
  " ": [0, 0, 0, 0, 0, 0, 0],
  "0": [14, 17, 19, 21, 25, 17, 14],
  "1": [4, 12, 4, 4, 4, 4, 14],
  "2": [14, 17, 1, 2, 4, 8, 31],
  "3": [14, 17, 1, 6, 1, 17, 14],
  "4": [2, 6, 10, 18, 31, 2, 2],
  "5": [31, 16, 30, 1, 1, 17, 14],
  "6": [6, 8, 16, 30, 17, 17, 14],
  "7": [31, 1, 2, 4, 8, 8, 8],
  "8": [14, 17, 17, 14, 17, 17, 14],
  "9": [14, 17, 17, 15, 1, 2, 12],
  "-": [0, 0, 0, 14, 0, 0, 0],
  "+": [0, 4, 4, 31, 4, 4, 0],
  ".": [0, 0, 0, 0, 0, 12, 12],
  ",": [0, 0, 0, 0, 12, 4, 8],
  "/": [1, 1, 2, 4, 8, 16, 16],
  "[": [14, 8, 8, 8, 8, 8, 14],
  "]": [14, 2, 2, 2, 2, 2, 14],
  "(": [2, 4, 8, 8, 8, 4, 2],
  ")": [8, 4, 2, 2, 2, 4, 8],
  "=": [0, 0, 31, 0, 31, 0, 0],
  "?": [14, 17, 1, 2, 4, 0, 4],
  "_": [0, 0, 0, 0, 0, 0, 31],
  A: [14, 17, 17, 31, 17, 17, 17],
  B: [30, 17, 17, 30, 17, 17, 30],
  C: [14, 17, 16, 16, 16, 17, 14],
  D: [30, 17, 17, 17, 17, 17, 30],
  E: [31, 16, 16, 30, 16, 16, 31],
  F: [31, 16, 16, 30, 16, 16, 16],
  G: [14, 17, 16, 23, 17, 17, 15],
  H: [17, 17, 17, 31, 17, 17, 17],
  I: [14, 4, 4, 4, 4, 4, 14],
  J: [7, 2, 2, 2, 2, 18, 12],
  K: [17, 18, 20, 24, 20, 18, 17],
  L: [16, 16, 16, 16, 16, 16, 31],
  M: [17, 27, 21, 21, 17, 17, 17],
  N: [17, 25, 21, 19, 17, 17, 17],
  O: [14, 17, 17, 17, 17, 17, 14],
  P: [30, 17, 17, 30, 16, 16, 16],
  Q: [14, 17, 17, 17, 21, 18, 13],
  R: [30, 17, 17, 30, 20, 18, 17],
  S: [15, 16, 16, 14, 1, 1, 30],
  T: [31, 4, 4, 4, 4, 4, 4],
  U: [17, 17, 17, 17, 17, 17, 14],
  V: [17, 17, 17, 17, 17, 10, 4],
  W: [17, 17, 17, 21, 21, 27, 17],
  X: [17, 17, 10, 4, 10, 17, 17],
  Y: [17, 17, 10, 4, 4, 4, 4],
  Z: [31, 1, 2, 4, 8, 16, 31],
};
