"""Delimited output and the figures rendered alongside it.

Report-producing commands write a CSV and, unless asked not to, a PNG
with the same stem next to it.  CSV cells are formatted explicitly so
identical inputs give identical bytes.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return f"{float(value):.10g}"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def figure_path(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".png")


def drift_profile_figure(
    rows: Sequence[tuple],
    path: str | Path,
    title: str,
) -> None:
    """rows: (delta, size, d_min, d_mean, d_max, undefined)."""
    deltas = [float(r[0]) for r in rows]
    mins = [None if r[2] is None else float(r[2]) for r in rows]
    means = [None if r[3] is None else float(r[3]) for r in rows]
    maxs = [None if r[4] is None else float(r[4]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.plot(deltas, means, color="C0", lw=1.6, label="mean")
    if any(v is not None for v in mins):
        ax.plot(deltas, mins, color="C0", lw=0.8, ls="--", label="min")
        ax.plot(deltas, maxs, color="C0", lw=0.8, ls=":", label="max")
    ax.set_xlabel("density of the vertex set")
    ax.set_ylabel("odd drift")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def hitting_time_figure(steps: Sequence[int | None], cap: int, path: str | Path, title: str) -> None:
    done = [s for s in steps if s is not None]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if done:
        ax.hist(done, bins=min(30, max(5, len(done) // 4)), color="C2", alpha=0.85)
    censored = len(steps) - len(done)
    if censored:
        ax.axvline(cap, color="C3", ls="--", label=f"{censored} censored at cap")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("steps to satisfaction")
    ax.set_ylabel("trials")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def bench_figure(rows: Sequence[tuple], exponent: float, path: str | Path, title: str) -> None:
    """rows: (size, trials, censored, mean_capped)."""
    xs = [r[0] for r in rows]
    ys = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(xs, ys, "o-", color="C1")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("instance size")
    ax.set_ylabel("mean steps")
    ax.set_title(f"{title} (fit exponent {exponent:.2f})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
