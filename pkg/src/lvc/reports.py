"""Deterministic JSON report serialization: UTF-8, sorted keys, compact."""

from __future__ import annotations

import json

from .errors import IoFailure


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, allow_nan=False)


def write_report(path, report) -> None:
    try:
        with open(path, "wb") as f:
            f.write(dumps(report).encode("utf-8"))
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
