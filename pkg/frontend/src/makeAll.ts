import { existsSync, mkdirSync } from 'node:fs';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { FigureResult } from './figure.js';
import { writeFigure } from './figure.js';
import * as cascade from './figures/cascade.js';
import * as detuningMap from './figures/detuningMap.js';
import * as ensemble from './figures/ensemble.js';
import * as fourlevel from './figures/fourlevel.js';
import * as histogram from './figures/histogram.js';
import * as polarisation from './figures/polarisation.js';
import * as ratio from './figures/ratio.js';
import * as snrBeta from './figures/snrBeta.js';
import * as squeeze from './figures/squeeze.js';
import * as transmission from './figures/transmission.js';

export interface FigureSpec {
  /** Basename of the input CSV inside the data directory. */
  csv: string;
  render: (csvPath: string) => FigureResult;
}

/** Every figure, keyed by output name, with the CSV it consumes. */
export const FIGURES: Record<string, FigureSpec> = {
  polarisation: { csv: 'polarisation.csv', render: polarisation.render },
  snr_beta: { csv: 'snr_beta.csv', render: snrBeta.render },
  histogram: { csv: 'histogram.csv', render: histogram.render },
  detuning_map: { csv: 'detuning_map.csv', render: detuningMap.render },
  squeeze: { csv: 'squeeze.csv', render: squeeze.render },
  ensemble: { csv: 'ensemble.csv', render: ensemble.render },
  transmission: { csv: 'transmission.csv', render: transmission.render },
  cascade: { csv: 'cascade.csv', render: cascade.render },
  fourlevel: { csv: 'fourlevel.csv', render: fourlevel.render },
  ratio: { csv: 'ratio.csv', render: ratio.render },
};

/**
 * Render every figure whose CSV exists in `csvDir` into `outDir` (SVG + PNG).
 * Returns the names rendered. A present-but-invalid CSV is a hard error;
 * an absent CSV is skipped so partial experiment runs still produce figures.
 */
export async function makeAll(csvDir: string, outDir: string): Promise<string[]> {
  mkdirSync(outDir, { recursive: true });
  const rendered: string[] = [];
  for (const [name, spec] of Object.entries(FIGURES)) {
    const csvPath = join(csvDir, spec.csv);
    if (!existsSync(csvPath)) continue;
    const fig = spec.render(csvPath);
    await writeFigure(fig, outDir);
    rendered.push(name);
  }
  return rendered;
}

async function main(): Promise<void> {
  const [csvDir, outDir] = process.argv.slice(2);
  if (!csvDir || !outDir) {
    console.error('usage: node dist/makeAll.js <csv-dir> <out-dir>');
    process.exit(2);
  }
  const rendered = await makeAll(csvDir, outDir);
  if (rendered.length === 0) {
    console.error(`no recognised CSVs found in ${csvDir}`);
    process.exit(1);
  }
  for (const name of rendered) {
    console.log(`wrote ${name}.svg, ${name}.png`);
  }
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  main().catch((err) => {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  });
}
