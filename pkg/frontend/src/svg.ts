/**
 * Deterministic grouped-bar SVG emitter.
 *
 * One group per data regime on the x axis, one bar per method inside each
 * group, methods as legend entries. Every bar carries its exact value in a
 * data-value attribute, so downstream checks can read figures numerically
 * instead of measuring pixels.
 */

import { Aggregation } from "./aggregate";

const WIDTH = 720;
const HEIGHT = 420;
const MARGIN = { top: 36, right: 24, bottom: 64, left: 64 };
const PALETTE = ["#4878cf", "#ee854a", "#6acc65", "#d65f5f", "#956cb4"];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface ChartOptions {
  title: string;
  yLabel: string;
  /** Fix the y-axis top (proportions use 1); otherwise scaled to the data. */
  yMax?: number;
  referenceLine?: number;
}

export function renderBarChart(agg: Aggregation, options: ChartOptions): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const values = agg.cells.map((c) => c.value);
  const dataMax = values.length ? Math.max(...values) : 0;
  const yMax =
    options.yMax ?? Math.max(dataMax * 1.1, options.referenceLine ?? 0, 1e-12);
  const yPix = (v: number) => MARGIN.top + plotH - (v / yMax) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${esc(options.title)}</text>`
  );

  // axes and y ticks
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`
  );
  const ticks = 5;
  for (let t = 0; t <= ticks; t++) {
    const v = (yMax * t) / ticks;
    const y = yPix(v);
    parts.push(
      `<line x1="${x0 - 4}" y1="${y}" x2="${x0}" y2="${y}" stroke="black"/>`,
      `<text x="${x0 - 8}" y="${y + 4}" text-anchor="end" font-size="11">${v.toPrecision(3)}</text>`
    );
  }
  parts.push(
    `<text transform="rotate(-90 16 ${MARGIN.top + plotH / 2})" x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12">${esc(options.yLabel)}</text>`
  );

  if (agg.cells.length === 0) {
    parts.push(
      `<text x="${WIDTH / 2}" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" fill="#666">no data</text>`
    );
  }

  // grouped bars
  const groups = agg.regimes;
  const groupW = groups.length ? plotW / groups.length : plotW;
  const slotW = agg.methods.length ? (groupW * 0.8) / agg.methods.length : groupW;
  groups.forEach((regime, g) => {
    const gx = x0 + g * groupW + groupW * 0.1;
    agg.methods.forEach((method, m) => {
      const cell = agg.cells.find(
        (c) => c.dataRegime === regime && c.method === method
      );
      if (!cell) return;
      const barH = (cell.value / yMax) * plotH;
      const x = gx + m * slotW;
      parts.push(
        `<rect class="bar" data-regime="${esc(regime)}" data-method="${esc(method)}" ` +
          `data-value="${cell.value}" x="${x}" y="${yPix(cell.value)}" ` +
          `width="${slotW * 0.9}" height="${barH}" fill="${PALETTE[m % PALETTE.length]}"/>`
      );
    });
    parts.push(
      `<text x="${x0 + g * groupW + groupW / 2}" y="${y0 + 18}" text-anchor="middle" font-size="12">${esc(regime)}</text>`
    );
  });

  // reference line above the bars
  if (options.referenceLine !== undefined) {
    const y = yPix(options.referenceLine);
    parts.push(
      `<line class="reference-line" data-level="${options.referenceLine}" ` +
        `x1="${x0}" y1="${y}" x2="${x0 + plotW}" y2="${y}" ` +
        `stroke="#333" stroke-dasharray="6 4"/>`,
      `<text x="${x0 + plotW - 4}" y="${y - 5}" text-anchor="end" font-size="11" fill="#333">${options.referenceLine}</text>`
    );
  }

  // legend: one entry per method
  agg.methods.forEach((method, m) => {
    const lx = x0 + m * 170;
    const ly = HEIGHT - 18;
    parts.push(
      `<rect x="${lx}" y="${ly - 10}" width="12" height="12" fill="${PALETTE[m % PALETTE.length]}"/>`,
      `<text x="${lx + 17}" y="${ly + 1}" font-size="12">${esc(method)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
