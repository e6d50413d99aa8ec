import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['r_db', 'snr'];

/** SNR versus probe squeezing strength in dB. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const rDb = column(table, 'r_db');
  const snr = column(table, 'snr');
  const svg = xyChart({
    title: 'SNR vs probe squeezing',
    xLabel: 'squeezing (dB)',
    yLabel: 'SNR',
    refLineY: 1,
    refLineLabel: 'SNR = 1',
    yDomain: [0, 1.05],
    series: [{ label: 'SNR(r)', x: rDb, y: snr, markers: true }],
  });
  return { name: 'squeeze', svg, plotted: { r_db: rDb, snr } };
}
