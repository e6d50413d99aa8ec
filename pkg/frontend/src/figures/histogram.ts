import { histogramChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';
import { STYLE } from '../style.js';

export const COLUMNS = ['bin_lo', 'bin_hi', 'count_n0', 'count_n1'];

/** Overlaid signal histograms for the zero- and one-photon ensembles. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const binLo = column(table, 'bin_lo');
  const binHi = column(table, 'bin_hi');
  const countN0 = column(table, 'count_n0');
  const countN1 = column(table, 'count_n1');
  const svg = histogramChart({
    title: 'Integrated-signal histograms',
    xLabel: 'integrated signal S',
    yLabel: 'count',
    binLo,
    binHi,
    counts: [
      { label: 'n = 0', values: countN0, color: STYLE.series[0] },
      { label: 'n = 1', values: countN1, color: STYLE.series[1] },
    ],
  });
  return {
    name: 'histogram',
    svg,
    plotted: { bin_lo: binLo, bin_hi: binHi, count_n0: countN0, count_n1: countN1 },
  };
}
