import { createHash } from 'node:crypto';

/**
 * Canonical checksum of a numeric array: sha256 over the values at full
 * double precision. Used to prove that what a figure plots is exactly a CSV
 * column, with no numeric transformation beyond axis scaling.
 */
export function checksumArray(values: number[]): string {
  const canonical = values.map((v) => v.toPrecision(17)).join(',');
  return createHash('sha256').update(canonical).digest('hex');
}
