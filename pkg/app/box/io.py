from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from app.box.tables import TripartiteBox, make_box
from app.schemas.core import BellScenario


class BoxFormatError(ValueError):
    """Malformed box file; the message names the offending location."""


def _check_nested(value: Any, shape: tuple, where: str) -> None:
    if not shape:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise BoxFormatError(f'{where}: expected a number, got {type(value).__name__}')
        if not math.isfinite(value):
            raise BoxFormatError(f'{where}: expected a finite number, got {value}')
        return
    if not isinstance(value, list):
        raise BoxFormatError(f'{where}: expected a list of {shape[0]} entries')
    if len(value) != shape[0]:
        raise BoxFormatError(f'{where}: expected {shape[0]} entries, got {len(value)}')
    for k, item in enumerate(value):
        _check_nested(item, shape[1:], f'{where}[{k}]')


def box_from_json(data: Any, source: str = '<memory>') -> TripartiteBox:
    """Build a box from the {"m": M, "table": [i][j][a][b][e]} document; bit 0 means +1."""
    if not isinstance(data, dict):
        raise BoxFormatError(f'{source}: top level must be an object with "m" and "table"')
    m = data.get('m')
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise BoxFormatError(f'{source}: m must be an integer >= 2, got {m!r}')
    if 'table' not in data:
        raise BoxFormatError(f'{source}: missing "table"')
    scenario = BellScenario(m=m)
    _check_nested(data['table'], scenario.shape, f'{source}: table')
    return make_box(scenario, np.asarray(data['table'], dtype=float))


def read_box(path: Path) -> TripartiteBox:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as exc:
        raise BoxFormatError(f'{path}: invalid JSON at line {exc.lineno}: {exc.msg}') from exc
    return box_from_json(data, source=str(path))


def box_to_json(box: TripartiteBox) -> Dict[str, Any]:
    table: List[Any] = np.round(box.table, 15).tolist()
    return {'m': box.m, 'table': table}


def write_box(box: TripartiteBox, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(box_to_json(box), indent=2) + '\n', encoding='utf-8')
    return path
