import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['n', 'snr', 'snr_base', 'abs_diff'];

/** SNR invariance under ensemble rescaling: SNR(n) against the baseline. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const n = column(table, 'n');
  const snr = column(table, 'snr');
  const snrBase = column(table, 'snr_base');
  const svg = xyChart({
    title: 'SNR under ensemble rescaling',
    xLabel: 'rescaling factor n',
    yLabel: 'SNR',
    series: [
      { label: 'SNR(n)', x: n, y: snr, markers: true },
      { label: 'baseline', x: n, y: snrBase, dash: '6 4' },
    ],
  });
  return { name: 'ensemble', svg, plotted: { n, snr, snr_base: snrBase } };
}
