import { xyChart } from '../chart.js';
import { column, readCsv } from '../csv.js';
import type { FigureResult } from '../figure.js';

export const COLUMNS = ['ratio', 'beta_opt', 'snr_opt'];

/** Optimised SNR versus the decay-rate ratio, on a log axis. */
export function render(csvPath: string): FigureResult {
  const table = readCsv(csvPath, COLUMNS);
  const ratio = column(table, 'ratio');
  const betaOpt = column(table, 'beta_opt');
  const snrOpt = column(table, 'snr_opt');
  const svg = xyChart({
    title: 'Optimised SNR vs decay-rate ratio',
    xLabel: 'gamma_c / gamma_b',
    yLabel: 'value',
    xLog: true,
    yDomain: [0, 1.05],
    refLineY: 1,
    refLineLabel: 'SNR = 1',
    series: [
      { label: 'optimal SNR', x: ratio, y: snrOpt, markers: true },
      { label: 'optimal beta', x: ratio, y: betaOpt, markers: true, dash: '6 4' },
    ],
  });
  return {
    name: 'ratio',
    svg,
    plotted: { ratio, beta_opt: betaOpt, snr_opt: snrOpt },
  };
}
