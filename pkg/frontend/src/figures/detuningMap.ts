import { heatmapChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['delta_b', 'delta_c', 'snr'];

/** SNR over the two-detuning grid, with a marker at the maximum. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const deltaB = column(table, 'delta_b');
  const deltaC = column(table, 'delta_c');
  const snr = column(table, 'snr');
  const svg = heatmapChart({
    title: 'SNR over detunings',
    xLabel: 'delta_b',
    yLabel: 'delta_c',
    x: deltaB,
    y: deltaC,
    value: snr,
    markMaximum: true,
  });
  return {
    name: 'detuning_map',
    svg,
    plotted: { delta_b: deltaB, delta_c: deltaC, snr },
  };
}
