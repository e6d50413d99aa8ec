import { render } from '../figures/detuningMap.js';
import { runFigure } from '../runFigure.js';

await runFigure(render);
