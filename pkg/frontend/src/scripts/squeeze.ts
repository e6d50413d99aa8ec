import { render } from '../figures/squeeze.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
