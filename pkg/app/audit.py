from __future__ import annotations

import json
import sqlite3
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from app.config import RunConfig, get_settings

AUDIT_TABLE_SQL = '''
CREATE TABLE IF NOT EXISTS run_audit (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    ts TEXT NOT NULL,
    command TEXT NOT NULL,
    action TEXT NOT NULL,
    payload_json TEXT NOT NULL
);
'''


@dataclass
class AuditRecord:
    id: int
    ts: str
    command: str
    action: str
    payload: Dict[str, Any]


class RunAudit:
    """SQLite ledger with one row per CLI command outcome."""

    def __init__(self, settings: Optional[RunConfig] = None) -> None:
        self.settings = settings or get_settings()
        self.db_path = Path(self.settings.AUDIT_DB_PATH)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._ensure_table()

    def _connect(self) -> sqlite3.Connection:
        return sqlite3.connect(self.db_path)

    def _ensure_table(self) -> None:
        with self._connect() as conn:
            conn.execute(AUDIT_TABLE_SQL)
            conn.commit()

    def log(self, command: str, action: str, payload: Dict[str, Any]) -> None:
        with self._connect() as conn:
            conn.execute(
                'INSERT INTO run_audit(ts, command, action, payload_json) VALUES (?, ?, ?, ?)',
                (
                    datetime.now(timezone.utc).isoformat(),
                    command,
                    action,
                    json.dumps(payload, default=str, sort_keys=True),
                ),
            )
            conn.commit()

    def recent(self, limit: int = 50) -> List[AuditRecord]:
        with self._connect() as conn:
            rows = conn.execute(
                'SELECT id, ts, command, action, payload_json FROM run_audit '
                'ORDER BY id DESC LIMIT ?',
                (limit,),
            ).fetchall()
        return [
            AuditRecord(
                id=row[0], ts=row[1], command=row[2], action=row[3], payload=json.loads(row[4])
            )
            for row in rows
        ]
