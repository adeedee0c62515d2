"""CSV/JSON output and figure rendering for the command-line runs.

Every data file starts with '#'-prefixed metadata lines carrying the hash
of the resolved configuration, so outputs are traceable and re-runs of the
same configuration produce byte-identical payloads.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def config_hash(cfg: Mapping) -> str:
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()[:16]


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence],
              meta: Mapping) -> None:
    lines = [f"# {key}={value}" for key, value in sorted(meta.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload: Mapping) -> None:
    Path(path).write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def _plain(obj):
    if isinstance(obj, Mapping):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def save_line_figure(path: Path, xs, ys_by_label: Mapping[str, Sequence],
                     xlabel: str, ylabel: str, title: str = "",
                     logx: bool = False, logy: bool = False) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ys in ys_by_label.items():
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(ys_by_label) > 1:
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_snapshot_figure(path: Path, y, snapshots: Mapping[str, Sequence],
                         xlabel: str, ylabel: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, field in snapshots.items():
        ax.plot(y, field, linewidth=1.0, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
