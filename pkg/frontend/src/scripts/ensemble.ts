import { render } from '../figures/ensemble.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
