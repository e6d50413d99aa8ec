import { mkdtempSync, readFileSync, statSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { checksumArray } from '../src/checksum.js';
import { column, readCsv } from '../src/csv.js';
import { writeFigure } from '../src/figure.js';
import { FIGURES, makeAll } from '../src/makeAll.js';

const DATA_DIR = join(fileURLToPath(import.meta.url), '..', '..', 'testdata');

describe.each(Object.entries(FIGURES))('figure %s', (name, spec) => {
  const csvPath = join(DATA_DIR, spec.csv);

  it('renders an SVG document', () => {
    const fig = spec.render(csvPath);
    expect(fig.name).toBe(name);
    expect(fig.svg.startsWith('<svg ')).toBe(true);
    expect(fig.svg.endsWith('</svg>')).toBe(true);
  });

  it('plots exactly the CSV columns (checksum match)', () => {
    const fig = spec.render(csvPath);
    const table = readCsv(csvPath, readHeader(csvPath));
    const plottedNames = Object.keys(fig.plotted);
    expect(plottedNames.length).toBeGreaterThan(0);
    for (const col of plottedNames) {
      expect(checksumArray(fig.plotted[col])).toBe(
        checksumArray(column(table, col)),
      );
    }
  });

  it('renders byte-identically on repeat', () => {
    const a = spec.render(csvPath);
    const b = spec.render(csvPath);
    expect(a.svg).toBe(b.svg);
  });

  it('rejects a CSV with a renamed column, naming it', () => {
    const text = readFileSync(csvPath, 'utf8');
    const lines = text.split('\n');
    const header = lines[0].split(',');
    header[header.length - 1] = 'bogus';
    const dir = mkdtempSync(join(tmpdir(), 'fig-'));
    const bad = join(dir, spec.csv);
    writeFileSync(bad, [header.join(','), ...lines.slice(1)].join('\n'));
    expect(() => spec.render(bad)).toThrow(/"bogus"/);
  });

  it('rejects an empty CSV', () => {
    const dir = mkdtempSync(join(tmpdir(), 'fig-'));
    const bad = join(dir, spec.csv);
    writeFileSync(bad, '');
    expect(() => spec.render(bad)).toThrow(/empty file/);
  });
});

function readHeader(path: string): string[] {
  return readFileSync(path, 'utf8').split('\n')[0].split(',');
}

describe('writeFigure', () => {
  it('emits both SVG and PNG', async () => {
    const fig = FIGURES.cascade.render(join(DATA_DIR, 'cascade.csv'));
    const out = mkdtempSync(join(tmpdir(), 'figout-'));
    await writeFigure(fig, out);
    const svg = readFileSync(join(out, 'cascade.svg'), 'utf8');
    expect(svg).toBe(fig.svg);
    const png = readFileSync(join(out, 'cascade.png'));
    // PNG magic bytes
    expect([...png.subarray(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
    expect(statSync(join(out, 'cascade.png')).size).toBeGreaterThan(1000);
  });
});

describe('makeAll', () => {
  it('renders every fixture and skips absent CSVs', async () => {
    const out = mkdtempSync(join(tmpdir(), 'all-'));
    const rendered = await makeAll(DATA_DIR, out);
    expect(rendered.sort()).toEqual(Object.keys(FIGURES).sort());
    for (const name of rendered) {
      expect(statSync(join(out, `${name}.svg`)).size).toBeGreaterThan(0);
      expect(statSync(join(out, `${name}.png`)).size).toBeGreaterThan(0);
    }
    const empty = mkdtempSync(join(tmpdir(), 'nocsv-'));
    const out2 = mkdtempSync(join(tmpdir(), 'all2-'));
    expect(await makeAll(empty, out2)).toEqual([]);
  });
});
