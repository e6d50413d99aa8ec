import { render } from '../figures/snrBeta.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
