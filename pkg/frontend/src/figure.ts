// Figure model shared by the SVG and PNG back ends: panels of log-x /
// linear-y magnitude plots with curves, legends and optional guide lines.

export interface Curve {
  x: number[];
  y: number[];
  label?: string;
  color: string;
  dash?: boolean;
}

export interface Panel {
  title?: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
  /** reference roll-off guides in dB/decade, drawn through the last point */
  guides?: number[];
}

export interface Figure {
  width: number;
  height: number;
  columns: number;
  panels: Panel[];
  legend: string[];
}

export const PALETTE = ["#1f6fb4", "#c03a2b", "#2e8b57", "#8455b8", "#b8860b", "#444444"];

export interface Tick {
  value: number;
  label: string;
}

export function logTicks(lo: number, hi: number): Tick[] {
  const ticks: Tick[] = [];
  const d0 = Math.ceil(Math.log10(lo) - 1e-9);
  const d1 = Math.floor(Math.log10(hi) + 1e-9);
  for (let d = d0; d <= d1; d++) {
    const v = Math.pow(10, d);
    ticks.push({ value: v, label: v >= 1 ? String(v) : v.toPrecision(1) });
  }
  return ticks;
}

export function linearTicks(lo: number, hi: number, target = 6): Tick[] {
  const span = hi - lo;
  if (!(span > 0)) return [{ value: lo, label: lo.toPrecision(3) }];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (raw <= mult * mag) {
      step = mult * mag;
      break;
    }
  }
  const ticks: Tick[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    const rounded = Math.abs(v) < 1e-12 * span ? 0 : v;
    ticks.push({ value: rounded, label: formatTick(rounded) });
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  if (Math.abs(v) >= 1000 || Math.abs(v) < 0.01) return v.toExponential(0);
  return String(Math.round(v * 100) / 100);
}

export interface PanelExtent {
  xLo: number;
  xHi: number;
  yLo: number;
  yHi: number;
}

export function panelExtent(panel: Panel): PanelExtent {
  let xLo = Infinity;
  let xHi = -Infinity;
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const c of panel.curves) {
    for (let i = 0; i < c.x.length; i++) {
      const x = c.x[i];
      const y = c.y[i];
      if (x > 0 && Number.isFinite(y)) {
        xLo = Math.min(xLo, x);
        xHi = Math.max(xHi, x);
        yLo = Math.min(yLo, y);
        yHi = Math.max(yHi, y);
      }
    }
  }
  if (!Number.isFinite(xLo)) {
    xLo = 0.1;
    xHi = 1000;
    yLo = -1;
    yHi = 1;
  }
  if (xLo === xHi) {
    xLo /= 2;
    xHi *= 2;
  }
  const pad = Math.max(0.05 * (yHi - yLo), 1.0);
  return { xLo, xHi, yLo: yLo - pad, yHi: yHi + pad };
}

/** Piecewise-linear guide of the given slope (dB/dec) anchored at the curve end. */
export function guideLine(extent: PanelExtent, slopeDbPerDecade: number): Curve {
  const x0 = Math.sqrt(extent.xLo * extent.xHi);
  const x1 = extent.xHi;
  const yAnchor = extent.yLo + 0.8 * (extent.yHi - extent.yLo);
  const y1 = yAnchor + slopeDbPerDecade * Math.log10(x1 / x0);
  return {
    x: [x0, x1],
    y: [yAnchor, y1],
    color: "#999999",
    dash: true,
    label: `${slopeDbPerDecade} dB/dec`,
  };
}
