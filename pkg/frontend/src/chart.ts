import { scaleLinear, scaleLog, type ScaleContinuousNumeric } from 'd3-scale';
import { interpolateViridis } from 'd3-scale-chromatic';
import { line as d3line } from 'd3-shape';

import { STYLE } from './style.js';

const XMLNS = 'http://www.w3.org/2000/svg';

/** Fixed-precision coordinate so the SVG output is byte-stable. */
const px = (v: number): string => v.toFixed(2);

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function tickLabel(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(parseFloat(v.toPrecision(6)));
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dash?: string;
  markers?: boolean;
}

export interface XyChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLineY?: number;
  refLineLabel?: string;
  xLog?: boolean;
  yDomain?: [number, number];
}

interface Frame {
  x: ScaleContinuousNumeric<number, number>;
  y: ScaleContinuousNumeric<number, number>;
  parts: string[];
}

function openSvg(parts: string[], title: string): void {
  const { width, height, fontFamily } = STYLE;
  parts.push(
    `<svg xmlns="${XMLNS}" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="${fontFamily}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${px(width / 2)}" y="24" text-anchor="middle" ` +
      `font-size="${STYLE.titleSize}" fill="${STYLE.axisColor}">${esc(title)}</text>`,
  );
}

function drawAxes(
  f: Frame,
  xLabel: string,
  yLabel: string,
): void {
  const { margin, width, height, axisColor, gridColor, fontSize } = STYLE;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  for (const t of f.x.ticks(6)) {
    const xp = f.x(t);
    f.parts.push(
      `<line x1="${px(xp)}" y1="${px(y0)}" x2="${px(xp)}" y2="${px(y1)}" stroke="${gridColor}"/>`,
      `<text x="${px(xp)}" y="${px(y0 + 18)}" text-anchor="middle" ` +
        `font-size="${fontSize}" fill="${axisColor}">${tickLabel(t)}</text>`,
    );
  }
  for (const t of f.y.ticks(6)) {
    const yp = f.y(t);
    f.parts.push(
      `<line x1="${px(x0)}" y1="${px(yp)}" x2="${px(x1)}" y2="${px(yp)}" stroke="${gridColor}"/>`,
      `<text x="${px(x0 - 8)}" y="${px(yp + 4)}" text-anchor="end" ` +
        `font-size="${fontSize}" fill="${axisColor}">${tickLabel(t)}</text>`,
    );
  }
  f.parts.push(
    `<rect x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" height="${px(y0 - y1)}" ` +
      `fill="none" stroke="${axisColor}"/>`,
    `<text x="${px((x0 + x1) / 2)}" y="${px(y0 + 40)}" text-anchor="middle" ` +
      `font-size="${fontSize}" fill="${axisColor}">${esc(xLabel)}</text>`,
    `<text x="16" y="${px((y0 + y1) / 2)}" text-anchor="middle" ` +
      `font-size="${fontSize}" fill="${axisColor}" ` +
      `transform="rotate(-90 16 ${px((y0 + y1) / 2)})">${esc(yLabel)}</text>`,
  );
}

function frame(
  xDomain: [number, number],
  yDomain: [number, number],
  xLog: boolean,
): Frame {
  const { margin, width, height } = STYLE;
  const mk = xLog ? scaleLog() : scaleLinear();
  const x = mk
    .domain(xDomain)
    .range([margin.left, width - margin.right])
    .nice();
  const y = scaleLinear()
    .domain(yDomain)
    .range([height - margin.bottom, margin.top])
    .nice();
  return { x, y, parts: [] };
}

function extent(arrays: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const a of arrays) {
    for (const v of a) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function xyChart(opts: XyChartOptions): string {
  const xDomain = extent(opts.series.map((s) => s.x));
  const yValues = opts.series.map((s) => s.y);
  if (opts.refLineY !== undefined) yValues.push([opts.refLineY]);
  const yDomain = opts.yDomain ?? extent(yValues);
  const f = frame(xDomain, yDomain, opts.xLog ?? false);
  openSvg(f.parts, opts.title);
  drawAxes(f, opts.xLabel, opts.yLabel);

  if (opts.refLineY !== undefined) {
    const yp = f.y(opts.refLineY);
    const x1 = STYLE.width - STYLE.margin.right;
    f.parts.push(
      `<line x1="${px(STYLE.margin.left)}" y1="${px(yp)}" x2="${px(x1)}" ` +
        `y2="${px(yp)}" stroke="${STYLE.refLine}" stroke-dasharray="6 4"/>`,
    );
    if (opts.refLineLabel) {
      f.parts.push(
        `<text x="${px(x1 - 4)}" y="${px(yp - 5)}" text-anchor="end" ` +
          `font-size="${STYLE.fontSize}" fill="${STYLE.refLine}">` +
          `${esc(opts.refLineLabel)}</text>`,
      );
    }
  }

  opts.series.forEach((s, i) => {
    const color = s.color ?? STYLE.series[i % STYLE.series.length];
    const gen = d3line<number>()
      .x((_, k) => f.x(s.x[k]))
      .y((_, k) => f.y(s.y[k]));
    const d = gen(s.x.map((_, k) => k));
    if (d && s.x.length > 1) {
      const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : '';
      f.parts.push(
        `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.6"${dash}/>`,
      );
    }
    if (s.markers || s.x.length <= 1) {
      for (let k = 0; k < s.x.length; k++) {
        f.parts.push(
          `<circle cx="${px(f.x(s.x[k]))}" cy="${px(f.y(s.y[k]))}" r="2.8" ` +
            `fill="${color}"/>`,
        );
      }
    }
    // legend entry
    const lx = STYLE.margin.left + 10;
    const ly = STYLE.margin.top + 14 + 16 * i;
    f.parts.push(
      `<line x1="${px(lx)}" y1="${px(ly - 4)}" x2="${px(lx + 22)}" y2="${px(ly - 4)}" ` +
        `stroke="${color}" stroke-width="1.6"${s.dash ? ` stroke-dasharray="${s.dash}"` : ''}/>`,
      `<text x="${px(lx + 28)}" y="${px(ly)}" font-size="${STYLE.fontSize}" ` +
        `fill="${STYLE.axisColor}">${esc(s.label)}</text>`,
    );
  });
  f.parts.push('</svg>');
  return f.parts.join('\n');
}

export interface HistogramOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  binLo: number[];
  binHi: number[];
  counts: { label: string; values: number[]; color: string }[];
}

export function histogramChart(opts: HistogramOptions): string {
  const xDomain: [number, number] = [
    Math.min(...opts.binLo),
    Math.max(...opts.binHi),
  ];
  const yDomain: [number, number] = [
    0,
    Math.max(...opts.counts.flatMap((c) => c.values)),
  ];
  const f = frame(xDomain, yDomain, false);
  openSvg(f.parts, opts.title);
  drawAxes(f, opts.xLabel, opts.yLabel);
  const y0 = f.y(0);
  opts.counts.forEach((c, i) => {
    for (let k = 0; k < c.values.length; k++) {
      const xa = f.x(opts.binLo[k]);
      const xb = f.x(opts.binHi[k]);
      const yt = f.y(c.values[k]);
      f.parts.push(
        `<rect x="${px(xa)}" y="${px(yt)}" width="${px(xb - xa)}" ` +
          `height="${px(y0 - yt)}" fill="${c.color}" fill-opacity="0.55"/>`,
      );
    }
    const lx = STYLE.margin.left + 10;
    const ly = STYLE.margin.top + 14 + 16 * i;
    f.parts.push(
      `<rect x="${px(lx)}" y="${px(ly - 10)}" width="14" height="10" ` +
        `fill="${c.color}" fill-opacity="0.55"/>`,
      `<text x="${px(lx + 20)}" y="${px(ly)}" font-size="${STYLE.fontSize}" ` +
        `fill="${STYLE.axisColor}">${esc(c.label)}</text>`,
    );
  });
  f.parts.push('</svg>');
  return f.parts.join('\n');
}

export interface HeatmapOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  x: number[]; // per cell
  y: number[];
  value: number[];
  markMaximum?: boolean;
}

export function heatmapChart(opts: HeatmapOptions): string {
  const xs = [...new Set(opts.x)].sort((a, b) => a - b);
  const ys = [...new Set(opts.y)].sort((a, b) => a - b);
  const dx = xs.length > 1 ? xs[1] - xs[0] : 1;
  const dy = ys.length > 1 ? ys[1] - ys[0] : 1;
  const f = frame(
    [xs[0] - dx / 2, xs[xs.length - 1] + dx / 2],
    [ys[0] - dy / 2, ys[ys.length - 1] + dy / 2],
    false,
  );
  openSvg(f.parts, opts.title);
  const vLo = Math.min(...opts.value);
  const vHi = Math.max(...opts.value);
  const span = vHi - vLo || 1;
  let iMax = 0;
  for (let k = 0; k < opts.value.length; k++) {
    if (opts.value[k] > opts.value[iMax]) iMax = k;
    const xa = f.x(opts.x[k] - dx / 2);
    const xb = f.x(opts.x[k] + dx / 2);
    const ya = f.y(opts.y[k] + dy / 2);
    const yb = f.y(opts.y[k] - dy / 2);
    const color = interpolateViridis((opts.value[k] - vLo) / span);
    f.parts.push(
      `<rect x="${px(xa)}" y="${px(ya)}" width="${px(xb - xa)}" ` +
        `height="${px(yb - ya)}" fill="${color}"/>`,
    );
  }
  drawAxes(f, opts.xLabel, opts.yLabel);
  if (opts.markMaximum) {
    const cx = f.x(opts.x[iMax]);
    const cy = f.y(opts.y[iMax]);
    f.parts.push(
      `<line x1="${px(cx - 6)}" y1="${px(cy)}" x2="${px(cx + 6)}" y2="${px(cy)}" ` +
        `stroke="#ffffff" stroke-width="2"/>`,
      `<line x1="${px(cx)}" y1="${px(cy - 6)}" x2="${px(cx)}" y2="${px(cy + 6)}" ` +
        `stroke="#ffffff" stroke-width="2"/>`,
    );
  }
  f.parts.push('</svg>');
  return f.parts.join('\n');
}
