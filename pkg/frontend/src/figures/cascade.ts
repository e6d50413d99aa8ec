import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['n', 'snr_n'];

/** SNR versus the number of cascaded scatterers, against the unit line. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const n = column(table, 'n');
  const snrN = column(table, 'snr_n');
  const svg = xyChart({
    title: 'SNR vs cascade length',
    xLabel: 'number of scatterers n',
    yLabel: 'SNR',
    yDomain: [0, 1.05],
    refLineY: 1,
    refLineLabel: 'SNR = 1',
    series: [{ label: 'SNR(n)', x: n, y: snrN, markers: true }],
  });
  return { name: 'cascade', svg, plotted: { n, snr_n: snrN } };
}
