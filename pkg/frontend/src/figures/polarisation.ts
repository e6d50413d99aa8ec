import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['t', 'f_abs2', 'y_expect'];

/** Excitation amplitude and homodyne signal mean versus time. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const t = column(table, 't');
  const fAbs2 = column(table, 'f_abs2');
  const yExpect = column(table, 'y_expect');
  const svg = xyChart({
    title: 'Polarisation transient',
    xLabel: 't',
    yLabel: 'value',
    series: [
      { label: '|f(t)|^2', x: t, y: fAbs2 },
      { label: '<y(t)>', x: t, y: yExpect },
    ],
  });
  return {
    name: 'polarisation',
    svg,
    plotted: { t, f_abs2: fAbs2, y_expect: yExpect },
  };
}
