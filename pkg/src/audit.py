"""Structured, metadata-only audit records for engine runs.

The run audit never stores series content. It captures only what was asked
(command, model, truncation, flavor), how much came back and how the run ended,
so a JSONL trail can be replayed against the CLI later.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_AUDIT_PATH = Path(__file__).resolve().parent.parent / "logs" / "qtoric_runs.jsonl"

_DISABLED = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class RunAuditRecord:
    """Metadata-only audit record for one CLI invocation."""

    timestamp: str
    command: str
    model_name: str | None
    d_max: str | None
    flavor: str | None
    term_count: int
    checks_passed: bool | None
    exit_code: int


def build_run_record(
    *,
    command: str,
    model_name: str | None,
    d_max: Fraction | None,
    flavor: str | None,
    term_count: int,
    checks_passed: bool | None,
    exit_code: int,
) -> RunAuditRecord:
    """Create a timestamped run record."""
    return RunAuditRecord(
        timestamp=datetime.now(timezone.utc).isoformat(),
        command=command,
        model_name=model_name,
        d_max=str(d_max) if d_max is not None else None,
        flavor=flavor,
        term_count=term_count,
        checks_passed=checks_passed,
        exit_code=exit_code,
    )


def append_run_record(path: Path, record: RunAuditRecord) -> None:
    """Append one JSONL run record to ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as handle:
        handle.write(json.dumps(asdict(record), sort_keys=True) + "\n")


def audit_enabled() -> bool:
    return os.getenv("QTORIC_AUDIT", "true").strip().lower() not in _DISABLED


def audit_path() -> Path:
    """Configured trail path; the default sits beside the log directory at the repo root."""
    return Path(os.getenv("QTORIC_AUDIT_LOG_PATH", "").strip() or DEFAULT_AUDIT_PATH)


def record_run(record: RunAuditRecord) -> None:
    """Append ``record`` to the configured trail; I/O failures only log a warning."""
    if not audit_enabled():
        return
    path = audit_path()
    try:
        append_run_record(path, record)
    except OSError as exc:
        logger.warning("Failed to write run audit record to %s: %s", path, exc)
