import { writeFileSync } from 'node:fs';
import { join } from 'node:path';

import sharp from 'sharp';

/**
 * A rendered figure: the SVG document plus the exact arrays that were plotted,
 * keyed by the CSV column they came from. Tests checksum `plotted` against the
 * source columns to prove no figure ever recomputes or transforms the data.
 */
export interface FigureResult {
  name: string;
  svg: string;
  plotted: Record<string, number[]>;
}

/** Write `<name>.svg` and `<name>.png` into `outDir`. */
export async function writeFigure(
  fig: FigureResult,
  outDir: string,
): Promise<void> {
  writeFileSync(join(outDir, `${fig.name}.svg`), fig.svg);
  const png = await sharp(Buffer.from(fig.svg)).png().toBuffer();
  writeFileSync(join(outDir, `${fig.name}.png`), png);
}
