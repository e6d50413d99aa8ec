import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['beta', 'mean_s1', 'sigma_s', 'snr', 'method'];

/** Detection SNR versus probe amplitude, with the unit-SNR reference line. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const beta = column(table, 'beta');
  const snr = column(table, 'snr');
  const svg = xyChart({
    title: 'SNR vs probe amplitude',
    xLabel: 'beta',
    yLabel: 'SNR',
    yDomain: [0, 1.05],
    refLineY: 1,
    refLineLabel: 'SNR = 1',
    series: [{ label: 'SNR(beta)', x: beta, y: snr, markers: true }],
  });
  return { name: 'snr_beta', svg, plotted: { beta, snr } };
}
