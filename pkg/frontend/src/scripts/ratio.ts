import { render } from '../figures/ratio.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
