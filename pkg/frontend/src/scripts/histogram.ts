import { render } from '../figures/histogram.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
