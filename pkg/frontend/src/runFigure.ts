import { mkdirSync } from 'node:fs';

import type { FigureResult } from './figure.js';
import { writeFigure } from './figure.js';

/** Shared CLI body for the per-figure scripts: <csv-path> <out-dir>. */
export async function runFigure(
  render: (csvPath: string) => FigureResult,
): Promise<void> {
  const [csvPath, outDir] = process.argv.slice(2);
  if (!csvPath || !outDir) {
    console.error(`usage: node ${process.argv[1]} <csv-path> <out-dir>`);
    process.exit(2);
  }
  try {
    const fig = render(csvPath);
    mkdirSync(outDir, { recursive: true });
    await writeFigure(fig, outDir);
    console.log(`wrote ${fig.name}.svg, ${fig.name}.png`);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
