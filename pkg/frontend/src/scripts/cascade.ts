import { render } from '../figures/cascade.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
