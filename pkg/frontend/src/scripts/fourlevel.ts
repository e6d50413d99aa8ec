import { render } from '../figures/fourlevel.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
