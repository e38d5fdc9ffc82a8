from __future__ import annotations

import json

from app.config import get_settings
from app.strength import c_delta, delta_grid, grid_oracle
from app.telemetry import reset_metrics, summarize


def main() -> None:
    settings = get_settings()
    reset_metrics()
    rows = []
    for delta in delta_grid(0.5):
        solved = c_delta(delta, tol=settings.SOLVER_TOL, max_iter=settings.SOLVER_MAX_ITER)
        upper = grid_oracle(delta, step=0.05)
        rows.append(
            {
                'delta': delta,
                'c_delta': round(solved.value, 6),
                'iterations': solved.iterations,
                'grid_upper_bound': round(upper, 6),
            }
        )
    timings = summarize()
    settings.REPORTS_DIR.mkdir(parents=True, exist_ok=True)
    path = settings.REPORTS_DIR / 'benchmarks.json'
    path.write_text(json.dumps({'rows': rows, 'timings': timings}, indent=2), encoding='utf-8')

    print('Solver benchmark:')
    for row in rows:
        print(
            '  delta={delta:.2f} c_delta={c_delta:.6f} iterations={iterations} '
            'grid={grid_upper_bound:.6f}'.format(**row)
        )
    for name, stats in timings.items():
        print(f'  {name}: calls={int(stats["calls"])} p95={stats["p95_ms"]:.2f}ms')


if __name__ == '__main__':
    main()
