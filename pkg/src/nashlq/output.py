"""History and report serialization.

Histories go to CSV (header ``stage,k_1..k_n,J_1..J_n,g_1..g_n``) or JSON
lines; floats are written in shortest round-trip form so re-reading a file
reproduces every value bit for bit.  All files are UTF-8 with LF endings.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .learning import LearnRun

__all__ = [
    "history_header",
    "write_history_csv",
    "read_history_csv",
    "write_history_jsonl",
    "read_history_jsonl",
    "write_history",
    "write_json",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def history_header(n: int) -> list[str]:
    return (
        ["stage"]
        + [f"k_{i}" for i in range(1, n + 1)]
        + [f"J_{i}" for i in range(1, n + 1)]
        + [f"g_{i}" for i in range(1, n + 1)]
    )


def _rows(run: LearnRun):
    for rec in run.history:
        yield rec.stage, rec.profile.k, rec.cost, rec.grad


def write_history_csv(path, run: LearnRun) -> Path:
    path = Path(path)
    n = len(run.final)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(history_header(n))
        for stage, k, j, g in _rows(run):
            writer.writerow([stage] + [_fmt(v) for v in (*k, *j, *g)])
    return path


def read_history_csv(path) -> dict[str, np.ndarray]:
    """Read a history CSV back into ``stage``, ``k``, ``J``, ``g`` arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = (len(header) - 1) // 3
        rows = [row for row in reader if row]
    stage = np.array([int(r[0]) for r in rows])
    data = np.array([[float(v) for v in r[1:]] for r in rows])
    return {
        "stage": stage,
        "k": data[:, :n],
        "J": data[:, n : 2 * n],
        "g": data[:, 2 * n :],
    }


def write_history_jsonl(path, run: LearnRun) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for stage, k, j, g in _rows(run):
            fh.write(
                json.dumps(
                    {"stage": stage, "k": list(map(float, k)),
                     "J": list(map(float, j)), "g": list(map(float, g))}
                )
            )
            fh.write("\n")
    return path


def read_history_jsonl(path) -> dict[str, np.ndarray]:
    stages, ks, js, gs = [], [], [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            stages.append(rec["stage"])
            ks.append(rec["k"])
            js.append(rec["J"])
            gs.append(rec["g"])
    return {
        "stage": np.array(stages),
        "k": np.array(ks),
        "J": np.array(js),
        "g": np.array(gs),
    }


def write_history(path, run: LearnRun, fmt: str = "csv") -> Path:
    if fmt == "csv":
        return write_history_csv(path, run)
    if fmt == "json-lines":
        return write_history_jsonl(path, run)
    raise ValueError(f"unknown history format {fmt!r}")


def write_json(path, payload) -> Path:
    """Deterministic JSON report: sorted keys, LF endings, round-trip floats."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
