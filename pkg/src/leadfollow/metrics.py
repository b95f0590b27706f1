"""Per-interval integral-of-absolute-error metrics and comparison tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np


class CoverageError(ValueError):
    """Samples do not span the requested integration window."""


@dataclass(frozen=True)
class IntervalMetrics:
    interval: tuple[float, float]
    iae_ed: float
    iae_ese: float

    def __post_init__(self):
        t0, t1 = self.interval
        if not t1 > t0:
            raise ValueError(f"empty interval {self.interval}")


def iae(times: Sequence[float], values: Sequence[float], t0: float, t1: float, tol: float = 1e-9) -> float:
    """Trapezoidal integral of ``|value|`` over ``[t0, t1]``.

    Endpoints falling between samples are linearly interpolated.
    """
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    if t1 == t0:
        return 0.0
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("times and values must be 1-D arrays of equal length")
    if t.size == 0 or t[0] > t0 + tol or t[-1] < t1 - tol:
        span = (t[0], t[-1]) if t.size else "no samples"
        raise CoverageError(f"samples cover {span}, need [{t0}, {t1}]")
    if np.any(np.diff(t) < 0):
        raise ValueError("times must be sorted")
    inside = (t > t0) & (t < t1)
    tt = np.concatenate(([t0], t[inside], [t1]))
    yy = np.concatenate(([np.interp(t0, t, y)], y[inside], [np.interp(t1, t, y)]))
    a = np.abs(yy)
    return float(np.sum(0.5 * (a[1:] + a[:-1]) * np.diff(tt)))


def interval_metrics(times, e_d, e_s, e_s_ref, intervals) -> list[IntervalMetrics]:
    ese = np.asarray(e_s_ref, dtype=float) - np.asarray(e_s, dtype=float)
    return [IntervalMetrics((a, b), iae(times, e_d, a, b), iae(times, ese, a, b)) for a, b in intervals]


ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


@dataclass
class TableReport:
    """IAE rows per controller and interval, in insertion order."""

    rows: list[tuple[str, str, tuple[float, float], float, float]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["controller", "interval", "iae_ed", "iae_ese"])
        for name, label, _, ed, ese in self.rows:
            w.writerow([name, label, f"{ed:.6f}", f"{ese:.6f}"])
        return buf.getvalue()

    def to_text(self) -> str:
        header = ("controller", "interval", "span [s]", "iae_ed", "iae_ese")
        body = [(n, lab, f"{a:g}-{b:g}", f"{ed:.4f}", f"{ese:.4f}") for n, lab, (a, b), ed, ese in self.rows]
        widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) if i < 3 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))) for r in [header, *body]]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines)

    def value(self, controller: str, interval: str) -> tuple[float, float]:
        for name, label, _, ed, ese in self.rows:
            if name == controller and label == interval:
                return ed, ese
        raise KeyError((controller, interval))


def table_report(runs: Mapping[str, Sequence[IntervalMetrics]]) -> TableReport:
    """Join per-controller metrics; all runs must share interval boundaries."""
    if not runs:
        raise ValueError("no runs to report")
    spans = [tuple(m.interval for m in ms) for ms in runs.values()]
    if any(s != spans[0] for s in spans[1:]):
        raise ValueError("runs have mismatched intervals")
    rows = []
    for name, ms in runs.items():
        for k, m in enumerate(ms):
            rows.append((name, ROMAN[k], m.interval, m.iae_ed, m.iae_ese))
    return TableReport(rows)
