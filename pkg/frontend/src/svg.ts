// SVG renderer for the figure model.

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

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(fig: Figure): string {
  const rows = Math.ceil(fig.panels.length / fig.columns);
  const panelW = fig.width / fig.columns;
  const panelH = (fig.height - (fig.legend.length ? LEGEND_H : 0)) / rows;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fig.width}" height="${fig.height}" ` +
      `viewBox="0 0 ${fig.width} ${fig.height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${fig.width}" height="${fig.height}" fill="white"/>`,
  );
  fig.panels.forEach((panel, i) => {
    const px = (i % fig.columns) * panelW;
    const py = Math.floor(i / fig.columns) * panelH;
    parts.push(renderPanel(panel, px, py, panelW, panelH));
  });
  if (fig.legend.length) {
    const colors = fig.panels[0]?.curves.map((c) => c.color) ?? [];
    let x = MARGIN.left;
    const y = fig.height - 7;
    const entries: string[] = [];
    fig.legend.forEach((label, i) => {
      const color = colors[i % colors.length] ?? "#444444";
      entries.push(
        `<line x1="${x}" y1="${y - 4}" x2="${x + 22}" y2="${y - 4}" stroke="${color}" stroke-width="1.6"/>`,
        `<text x="${x + 27}" y="${y}" font-size="11">${esc(label)}</text>`,
      );
      x += 34 + 7 * label.length;
    });
    parts.push(entries.join(""));
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function renderPanel(panel: Panel, px: number, py: number, w: number, h: number): string {
  const extent = panelExtent(panel);
  const x0 = px + MARGIN.left;
  const y0 = py + MARGIN.top;
  const plotW = w - MARGIN.left - MARGIN.right;
  const plotH = h - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    x0 + (plotW * Math.log10(x / extent.xLo)) / Math.log10(extent.xHi / extent.xLo);
  const sy = (y: number) => y0 + plotH * (1 - (y - extent.yLo) / (extent.yHi - extent.yLo));

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${plotW}" height="${plotH}" fill="none" stroke="#222" stroke-width="1"/>`,
  );
  for (const t of logTicks(extent.xLo, extent.xHi)) {
    const X = sx(t.value);
    parts.push(
      `<line x1="${X.toFixed(2)}" y1="${y0}" x2="${X.toFixed(2)}" y2="${y0 + plotH}" stroke="#ddd" stroke-width="0.6"/>`,
      `<text x="${X.toFixed(2)}" y="${y0 + plotH + 14}" font-size="10" text-anchor="middle">${esc(t.label)}</text>`,
    );
  }
  for (const t of linearTicks(extent.yLo, extent.yHi)) {
    const Y = sy(t.value);
    parts.push(
      `<line x1="${x0}" y1="${Y.toFixed(2)}" x2="${x0 + plotW}" y2="${Y.toFixed(2)}" stroke="#ddd" stroke-width="0.6"/>`,
      `<text x="${x0 - 6}" y="${(Y + 3.5).toFixed(2)}" font-size="10" text-anchor="end">${esc(t.label)}</text>`,
    );
  }
  const curves = [...panel.curves];
  for (const g of panel.guides ?? []) {
    curves.push(guideLine(extent, g));
  }
  for (const c of curves) {
    const pts: string[] = [];
    for (let i = 0; i < c.x.length; i++) {
      if (c.x[i] > 0 && Number.isFinite(c.y[i])) {
        const Y = Math.min(Math.max(sy(c.y[i]), y0), y0 + plotH);
        pts.push(`${sx(c.x[i]).toFixed(2)},${Y.toFixed(2)}`);
      }
    }
    if (pts.length >= 2) {
      const dash = c.dash ? ' stroke-dasharray="6 4"' : "";
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="${c.color}" stroke-width="1.4"${dash}/>`,
      );
      if (c.dash && c.label) {
        const [endX, endY] = pts[pts.length - 1].split(",");
        parts.push(
          `<text x="${endX}" y="${Number(endY) - 4}" font-size="9" fill="#777" text-anchor="end">${esc(c.label)}</text>`,
        );
      }
    }
  }
  if (panel.title) {
    parts.push(
      `<text x="${x0 + plotW - 4}" y="${y0 + 14}" font-size="11" text-anchor="end" font-style="italic">${esc(panel.title)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${py + h - 10}" font-size="11" text-anchor="middle">${esc(panel.xLabel)}</text>`,
    `<text x="${px + 14}" y="${y0 + plotH / 2}" font-size="11" text-anchor="middle" transform="rotate(-90 ${px + 14} ${y0 + plotH / 2})">${esc(panel.yLabel)}</text>`,
  );
  return parts.join("\n");
}
