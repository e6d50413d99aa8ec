import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['t', 'pop4', 'pop3', 'diff'];

/** Target-level population: four-level model against its three-level reduction. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const t = column(table, 't');
  const pop4 = column(table, 'pop4');
  const pop3 = column(table, 'pop3');
  const svg = xyChart({
    title: 'Four-level model vs reduction',
    xLabel: 't',
    yLabel: 'population',
    series: [
      { label: 'four-level', x: t, y: pop4 },
      { label: 'reduced', x: t, y: pop3, dash: '6 4' },
    ],
  });
  return { name: 'fourlevel', svg, plotted: { t, pop4, pop3 } };
}
