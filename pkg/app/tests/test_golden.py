import json
from pathlib import Path

import pytest

from app.strength import c_delta

GOLDEN_PATH = Path(__file__).resolve().parent / 'golden' / 'strength_m2.json'


def _golden():
    if not GOLDEN_PATH.exists():
        pytest.skip('run scripts/generate_golden.py to create the strength fixture')
    return json.loads(GOLDEN_PATH.read_text(encoding='utf-8'))


def test_solver_agrees_with_golden_strength_values():
    golden = _golden()
    source = golden['source']
    assert source in ('closed_form', 'grid_oracle')
    assert len(golden['values']) == 21
    for key, expected in golden['values'].items():
        value = c_delta(float(key)).value
        assert value == pytest.approx(expected, abs=1e-3)
        if source == 'closed_form':
            assert value == pytest.approx(expected, abs=1e-5)
        else:
            assert value <= expected + 1e-6
