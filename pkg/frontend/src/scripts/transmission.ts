import { render } from '../figures/transmission.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
