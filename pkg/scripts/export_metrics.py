from __future__ import annotations

import csv
import json
import sqlite3
from pathlib import Path
from typing import Dict, Iterable, Tuple

from app.audit import AUDIT_TABLE_SQL
from app.config import get_settings

OUTPUT_DIR = Path('reports/telemetry')


def fetch_audit_rows(conn: sqlite3.Connection) -> Iterable[Tuple]:
    cursor = conn.execute(
        'SELECT id, ts, command, action, payload_json FROM run_audit ORDER BY id DESC'
    )
    yield from cursor.fetchall()


def fetch_command_stats(conn: sqlite3.Connection) -> Dict[str, Dict[str, int]]:
    stats: Dict[str, Dict[str, int]] = {}
    cursor = conn.execute(
        'SELECT command, action, COUNT(1) FROM run_audit GROUP BY command, action'
    )
    for command, action, count in cursor.fetchall():
        stats.setdefault(command, {})[action] = count
    return stats


def write_csv(path: Path, rows: Iterable[Tuple], header: Iterable[str]) -> None:
    with path.open('w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def main() -> None:
    settings = get_settings()
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    with sqlite3.connect(settings.AUDIT_DB_PATH) as conn:
        conn.execute(AUDIT_TABLE_SQL)
        audit_rows = list(fetch_audit_rows(conn))
        command_stats = fetch_command_stats(conn)

    header = ['id', 'ts', 'command', 'action', 'payload']
    write_csv(OUTPUT_DIR / 'run_audit.csv', audit_rows, header)
    (OUTPUT_DIR / 'command_summary.json').write_text(
        json.dumps(command_stats, indent=2), encoding='utf-8'
    )
    print(f'Exported {len(audit_rows)} audit rows to {OUTPUT_DIR.resolve()}')


if __name__ == '__main__':
    main()
