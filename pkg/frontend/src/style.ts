/** House style shared by every figure. Fixed so renders are deterministic. */
export const STYLE = {
  width: 640,
  height: 440,
  margin: { top: 40, right: 24, bottom: 52, left: 64 },
  fontFamily: 'Helvetica, Arial, sans-serif',
  fontSize: 12,
  titleSize: 14,
  axisColor: '#333333',
  gridColor: '#dddddd',
  series: ['#1f6fb2', '#d1495b', '#3e9651', '#9467bd', '#e1a100'],
  refLine: '#888888',
} as const;

export type Style = typeof STYLE;
