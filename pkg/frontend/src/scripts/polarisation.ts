import { render } from '../figures/polarisation.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
