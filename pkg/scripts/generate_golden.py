from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import typer

from app.strength import delta_grid, grid_oracle, optimal_family

GOLDEN_DIR = Path(__file__).resolve().parents[1] / 'app' / 'tests' / 'golden'
GOLDEN_PATH = GOLDEN_DIR / 'strength_m2.json'
GOLDEN_STEP = 0.01
SOURCES = ('closed_form', 'grid_oracle')


def generate_golden(
    path: Path = GOLDEN_PATH, source: str = 'grid_oracle', step: float = GOLDEN_STEP
) -> Path:
    """Two-setting strength at every delta of the 0.1 grid.

    ``grid_oracle`` stores upper bounds from feasible lattice points, ``closed_form`` the value
    of the equalized optimal family.
    """
    if source not in SOURCES:
        raise ValueError(f'source must be one of {SOURCES}, got {source!r}')
    values: Dict[str, float] = {}
    for delta in delta_grid(0.1):
        if source == 'grid_oracle':
            value = grid_oracle(delta, step=step)
        else:
            value = optimal_family(delta).value
        values[f'{delta:.1f}'] = round(value, 6)
        print(f'  delta={delta:.1f} {source}={values[f"{delta:.1f}"]:.6f}')
    document: Dict[str, Any] = {'source': source}
    if source == 'grid_oracle':
        document['grid_step'] = step
    document['values'] = values
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2) + '\n', encoding='utf-8')
    return path


def main(
    source: str = typer.Option('grid_oracle', '--source', help='closed_form or grid_oracle'),
    step: float = typer.Option(GOLDEN_STEP, '--step', help='Lattice spacing for grid_oracle'),
) -> None:
    path = generate_golden(source=source, step=step)
    print(f'Golden values written to {path}')


if __name__ == '__main__':
    typer.run(main)
