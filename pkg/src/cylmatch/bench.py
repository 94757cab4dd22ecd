"""Wall-clock measurements for the solver and the pair-scan kernels.

Two questions get numbers here: how solve time grows when the instance
size doubles (the scaling claim behind the practical mode), and what the
accelerated kernel buys over the numpy and pure-python fallbacks on the
same drawing.  Timings use best-of-``repeats`` to damp scheduler noise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import generate, kernels, solver
from .generate import GenConfig
from .geometry import Drawing


@dataclass(frozen=True)
class SolvePoint:
    n: int
    seed: int
    gen_seconds: float
    solve_seconds: float
    matched: int


@dataclass(frozen=True)
class BackendPoint:
    requested: str
    effective: str  # numba silently degrades to numpy when unavailable
    seconds: float
    crossings: int


def _best_of(fn, repeats: int) -> Tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        if dt < best:
            best = dt
    return best, result


def bench_solve(
    sizes: Sequence[int] = (20, 40, 80, 160),
    seed: int = 1,
    repeats: int = 1,
    drawings: Optional[List[Drawing]] = None,
) -> List[SolvePoint]:
    """Time solve() on one generated instance per size.

    Pre-built drawings skip generation (committed corpora are much faster
    to parse than to regenerate at the large end)."""
    points = []
    for i, n in enumerate(sizes):
        if drawings is not None:
            d, gen_dt = drawings[i], 0.0
        else:
            t0 = time.perf_counter()
            d = generate.gen_mixed(GenConfig(n=n, seed=seed))
            gen_dt = time.perf_counter() - t0
        dt, out = _best_of(lambda: solver.solve(d, solver.MODE_PRACTICAL), repeats)
        points.append(SolvePoint(n, seed, gen_dt, dt, len(out)))
    return points


def doubling_ratios(points: Sequence[SolvePoint]) -> List[Tuple[int, int, float]]:
    """(n, 2n, time ratio) for every size pair that exactly doubles."""
    by_n = {p.n: p for p in points}
    out = []
    for p in points:
        q = by_n.get(2 * p.n)
        if q is not None and p.solve_seconds > 0:
            out.append((p.n, q.n, q.solve_seconds / p.solve_seconds))
    return out


def bench_backends(
    n: int = 120, seed: int = 1, repeats: int = 3, d: Optional[Drawing] = None
) -> List[BackendPoint]:
    """Full pair scan of one drawing under every kernel backend."""
    if d is None:
        d = generate.gen_mixed(GenConfig(n=n, seed=seed))
    sc = kernels.scale_drawing(d)
    points = []
    for req in ("numba", "numpy", "python"):
        effective = kernels.backend_name(sc, req)
        if effective == "numba":
            kernels.scan_pairs(sc, kernels.MODE_ALL, backend=req)  # JIT warmup
        dt, res = _best_of(
            lambda: kernels.scan_pairs(sc, kernels.MODE_ALL, backend=req), repeats
        )
        points.append(BackendPoint(req, effective, dt, res.total_crossings))
    return points


def format_report(
    solve_points: Sequence[SolvePoint], backend_points: Sequence[BackendPoint]
) -> str:
    lines = [f"{'n':>6} {'gen s':>9} {'solve s':>9} {'matched':>8}"]
    for p in solve_points:
        lines.append(
            f"{p.n:>6} {p.gen_seconds:>9.3f} {p.solve_seconds:>9.4f} {p.matched:>8}"
        )
    for a, b, r in doubling_ratios(solve_points):
        lines.append(f"doubling {a} -> {b}: solve time x{r:.2f}")
    if backend_points:
        lines.append("")
        lines.append(f"{'backend':>8} {'ran as':>8} {'scan s':>9} {'crossings':>10}")
        for q in backend_points:
            lines.append(
                f"{q.requested:>8} {q.effective:>8} {q.seconds:>9.4f} {q.crossings:>10}"
            )
    return "\n".join(lines)
