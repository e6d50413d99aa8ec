import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['delta', 't_re', 't_im', 't_abs2'];

/** Probe transmission spectrum |t(delta)|^2. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const delta = column(table, 'delta');
  const tAbs2 = column(table, 't_abs2');
  const svg = xyChart({
    title: 'Transmission spectrum',
    xLabel: 'delta',
    yLabel: '|t|^2',
    yDomain: [0, 1.05],
    series: [{ label: '|t(delta)|^2', x: delta, y: tAbs2 }],
  });
  return { name: 'transmission', svg, plotted: { delta, t_abs2: tAbs2 } };
}
