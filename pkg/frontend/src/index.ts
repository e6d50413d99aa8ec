export { readCsv, column, textColumn, SchemaError, type Table } from './csv.js';
export { checksumArray } from './checksum.js';
export { xyChart, histogramChart, heatmapChart, type Series } from './chart.js';
export { writeFigure, type FigureResult } from './figure.js';
export { STYLE } from './style.js';
export { FIGURES, makeAll } from './makeAll.js';
