from __future__ import annotations

from pathlib import Path

import numpy as np

from app.box import make_box, reference_box, write_box
from app.geometry import build_q_delta, dump_polytope
from app.schemas.core import BellScenario
from app.strength import curve, delta_grid, write_curve_csv

SAMPLES_DIR = Path(__file__).resolve().parents[1] / 'app' / 'data' / 'samples'


def main() -> None:
    SAMPLES_DIR.mkdir(parents=True, exist_ok=True)
    uniform = make_box(BellScenario(m=2), np.full((2, 2, 2, 2, 2), 0.125))
    write_box(uniform, SAMPLES_DIR / 'uniform_box.json')
    write_box(reference_box(2.0, 0.46), SAMPLES_DIR / 'reference_box_delta2.json')
    (SAMPLES_DIR / 'q_delta_m2_delta2.txt').write_text(
        dump_polytope(build_q_delta(2, 2)), encoding='utf-8'
    )
    write_curve_csv(curve(2, delta_grid(0.5)), SAMPLES_DIR / 'curve_example.csv')
    print(f'Wrote samples to {SAMPLES_DIR}')


if __name__ == '__main__':
    main()
