"""Scaling benchmark: solve comb instances across a width sweep and fit
log-time slopes for the fast and naive join engines.

The emitted CSV has one row per (engine, width); the optional figure plots
total solve time against width on a log scale with the fitted slopes, which
is the visual form of the m^w versus naive-pairwise separation.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graphs import make_nice
from .instances import gen_comb
from .solver import DPOptions, solve

CSV_COLUMNS = ["engine", "m", "w", "n", "max_states", "join_ms", "total_ms"]

# Naive pairwise joins on a width-w comb touch ~6^(w-2) pairs; beyond this
# width the baseline is skipped by default.
DEFAULT_NAIVE_MAX_W = 13


@dataclass
class BenchRow:
    engine: str
    m: int
    w: int
    n: int
    max_states: int
    join_ms: int
    total_ms: int

    def as_list(self):
        return [self.engine, self.m, self.w, self.n, self.max_states,
                self.join_ms, self.total_ms]


def run_bench(
    m: int = 3,
    widths: Sequence[int] = tuple(range(8, 15)),
    engines: Sequence[str] = ("fast", "naive"),
    naive_max_w: int = DEFAULT_NAIVE_MAX_W,
    threads: int = 1,
    log=None,
) -> list[BenchRow]:
    rows = []
    for w in widths:
        inst = gen_comb(w, m=m)
        ntd = make_nice(inst.decomposition)
        for engine in engines:
            if engine == "naive" and w > naive_max_w:
                continue
            options = DPOptions(
                join=engine,
                force_convolution=(engine == "fast"),
                threads=threads,
            )
            t0 = time.perf_counter()
            rep = solve(inst.graph, ntd, inst.spec, shifts=inst.shifts, options=options)
            total_ms = int((time.perf_counter() - t0) * 1000)
            row = BenchRow(
                engine,
                m,
                w,
                inst.graph.n,
                rep.stats["max_language_size"],
                rep.stats["join_us"] // 1000,
                total_ms,
            )
            rows.append(row)
            if log is not None:
                print(
                    f"bench engine={engine} m={m} w={w} n={row.n} "
                    f"max_states={row.max_states} join_ms={row.join_ms} "
                    f"total_ms={row.total_ms}",
                    file=log,
                )
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_list())
    return buf.getvalue()


def fit_slope(rows: Sequence[BenchRow], engine: str) -> Optional[float]:
    """Least-squares slope of ln(total time) against width for one engine;
    None with fewer than two points."""
    pts = [(r.w, r.total_ms) for r in rows if r.engine == engine and r.total_ms > 0]
    if len(pts) < 2:
        return None
    ws = np.array([p[0] for p in pts], dtype=float)
    ys = np.log(np.array([p[1] for p in pts], dtype=float))
    return float(np.polyfit(ws, ys, 1)[0])


def render_plot(rows: Sequence[BenchRow], path: str) -> None:
    """Write the scaling figure (total time vs width, log scale) to a file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    m = rows[0].m if rows else 3
    for engine, marker in (("fast", "o"), ("naive", "s")):
        pts = sorted((r.w, r.total_ms) for r in rows if r.engine == engine)
        if not pts:
            continue
        ws = [p[0] for p in pts]
        ts = [max(p[1], 1) for p in pts]
        slope = fit_slope(rows, engine)
        label = f"{engine} join"
        if slope is not None:
            label += f" (slope {slope:.3f})"
        ax.semilogy(ws, ts, marker=marker, label=label)
    ref = np.log(m)
    ax.set_xlabel("decomposition width w")
    ax.set_ylabel("total solve time [ms]")
    ax.set_title(f"comb family scaling, m={m} (log m = {ref:.3f})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
