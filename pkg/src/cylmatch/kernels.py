"""Bulk exact intersection scans over integer-scaled drawings.

All drawing coordinates are rationals; scaling every coordinate by the least
common denominator L turns each predicate into integer sign arithmetic. On
that integer grid three interchangeable backends run the same pair scan:

* numba:  jit-compiled nested loop, the default hot path,
* numpy:  vectorized orientation filter, selected by CYLMATCH_KERNEL=numpy
          or when numba is unavailable,
* python: big-int reference loop, always exact, auto-forced whenever the
          scaled magnitudes could overflow int64.

Overflow safety is certified per drawing, never assumed: orientation tests
need max |coordinate| <= 2**29, crossing-point collection (used by the
three-edges-through-one-point check) needs <= 2**19. Both bounds hold for
everything the generators emit; exotic parsed inputs silently fall back to
the python backend.

The scan flags suspicious pairs only (multiple crossings, touching contacts,
crossing adjacent edges); callers re-examine flagged pairs with the exact
Fraction-level machinery, so every backend produces identical reports.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import DegenerateError
from .geometry import Drawing

try:  # pragma: no cover - exercised implicitly by backend selection
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


ORIENT_BOUND = 1 << 29
POINT_BOUND = 1 << 19

# pair-flag kinds shared by all backends
FLAG_MULTI = 1        # >= 2 crossings, or a crossing between adjacent edges
FLAG_TOUCH = 2        # tangency-style contact (breakpoint or collinear)
FLAG_VERTEX = 3       # terminal vertex of one edge inside the other
FLAG_CROSSING = 6     # any crossing at all (set-disjointness mode)

MODE_ALL = 0
MODE_SETS = 1
MODE_ONE = 2  # violations of one focus edge against everything else


@dataclass
class ScanResult:
    flagged: list            # (edge_index_a, edge_index_b, kind)
    total_crossings: int
    backend: str
    truncated: bool = False


@dataclass
class ScaledDrawing:
    """Integer-scaled segment soup of a drawing, grouped by edge."""

    drawing: Drawing
    L: int
    sx0: list
    sy0: list
    sx1: list
    sy1: list
    ptr: list                # edge -> [ptr[e], ptr[e+1]) segment range
    fvid: list
    lvid: list
    edge_u: list
    edge_v: list
    vx: list
    vy: list
    vid: list
    bound: int

    @property
    def m(self) -> int:
        return len(self.ptr) - 1

    @property
    def orient_safe(self) -> bool:
        return self.bound <= ORIENT_BOUND

    @property
    def point_safe(self) -> bool:
        return self.bound <= POINT_BOUND

    def np_arrays(self):
        i64 = np.int64
        return (
            np.array(self.sx0, dtype=i64),
            np.array(self.sy0, dtype=i64),
            np.array(self.sx1, dtype=i64),
            np.array(self.sy1, dtype=i64),
            np.array(self.ptr, dtype=i64),
            np.array(self.fvid, dtype=i64),
            np.array(self.lvid, dtype=i64),
        )


def scale_drawing(d: Drawing) -> ScaledDrawing:
    dens = [1]
    for v in d.vertices:
        dens.append(v.x.denominator)
        dens.append(v.y.denominator)
    for e in d.edges:
        for (x, y) in e.points:
            dens.append(x.denominator)
            dens.append(y.denominator)
    L = math.lcm(*dens)
    sx0, sy0, sx1, sy1 = [], [], [], []
    ptr = [0]
    fvid, lvid, eu, ev = [], [], [], []
    bound = L  # translated coords add +-L
    for e in d.edges:
        pts = [(int(x * L), int(y * L)) for (x, y) in e.points]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            sx0.append(x0)
            sy0.append(y0)
            sx1.append(x1)
            sy1.append(y1)
            bound = max(bound, abs(x0) + L, abs(x1) + L, abs(y0), abs(y1))
        ptr.append(len(sx0))
        fvid.append(e.first_vid)
        lvid.append(e.last_vid)
        eu.append(e.u)
        ev.append(e.v)
    vx = [int(v.x * L) for v in d.vertices]
    vy = [int(v.y * L) for v in d.vertices]
    vid = [v.id for v in d.vertices]
    for a, b in zip(vx, vy):
        bound = max(bound, abs(a) + L, abs(b))
    return ScaledDrawing(
        d, L, sx0, sy0, sx1, sy1, ptr, fvid, lvid, eu, ev, vx, vy, vid, bound
    )


def backend_name(sc: ScaledDrawing, requested: Optional[str] = None) -> str:
    req = requested or os.environ.get("CYLMATCH_KERNEL", "auto")
    if req not in ("auto", "numba", "numpy", "python"):
        raise ValueError(f"unknown kernel backend {req!r}")
    if not sc.orient_safe:
        return "python"
    if req == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if req == "numba" and not HAVE_NUMBA:
        return "numpy"
    return req


# ---------------------------------------------------------------------------
# pure-python reference


def _pair_scan_py(sc: ScaledDrawing, a: int, b: int):
    """(crossing_count, bad_level) for one edge pair; bad_level in
    {0, FLAG_TOUCH, FLAG_VERTEX}."""
    L = sc.L
    sx0, sy0, sx1, sy1 = sc.sx0, sc.sy0, sc.sx1, sc.sy1
    pa0, pa1 = sc.ptr[a], sc.ptr[a + 1]
    pb0, pb1 = sc.ptr[b], sc.ptr[b + 1]
    afx, afy = sx0[pa0], sy0[pa0]
    alx, aly = sx1[pa1 - 1], sy1[pa1 - 1]
    bfx, bfy = sx0[pb0], sy0[pb0]
    blx, bly = sx1[pb1 - 1], sy1[pb1 - 1]
    cnt = 0
    bad = 0
    for t in (-L, 0, L):
        if blx + t < afx or bfx + t > alx:
            continue
        i, j = pa0, pb0
        while i < pa1 and j < pb1:
            ax0, ax1 = sx0[i], sx1[i]
            bx0, bx1 = sx0[j] + t, sx1[j] + t
            if ax1 < bx0:
                i += 1
                continue
            if bx1 < ax0:
                j += 1
                continue
            ay0, ay1 = sy0[i], sy1[i]
            by0, by1 = sy0[j], sy1[j]
            o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
            o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
            o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
            o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
            s1 = (o1 > 0) - (o1 < 0)
            s2 = (o2 > 0) - (o2 < 0)
            s3 = (o3 > 0) - (o3 < 0)
            s4 = (o4 > 0) - (o4 < 0)
            if s1 * s2 < 0 and s3 * s4 < 0:
                cnt += 1
            elif o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
                if o1 == 0 and o2 == 0 and max(ax0, bx0) < min(ax1, bx1):
                    bad = max(bad, FLAG_TOUCH)
                for px, py, hit in (
                    (bx0, by0, o1 == 0 and ax0 <= bx0 <= ax1),
                    (bx1, by1, o2 == 0 and ax0 <= bx1 <= ax1),
                    (ax0, ay0, o3 == 0 and bx0 <= ax0 <= bx1),
                    (ax1, ay1, o4 == 0 and bx0 <= ax1 <= bx1),
                ):
                    if not hit:
                        continue
                    va = None
                    if px == afx and py == afy:
                        va = sc.fvid[a]
                    elif px == alx and py == aly:
                        va = sc.lvid[a]
                    vb = None
                    if px - t == bfx and py == bfy:
                        vb = sc.fvid[b]
                    elif px - t == blx and py == bly:
                        vb = sc.lvid[b]
                    if va is not None and vb is not None and va == vb:
                        continue  # shared endpoint, fine
                    if va is not None or vb is not None:
                        bad = max(bad, FLAG_VERTEX)
                    else:
                        bad = max(bad, FLAG_TOUCH)
            if ax1 < bx1:
                i += 1
            elif bx1 < ax1:
                j += 1
            else:
                i += 1
                j += 1
    return cnt, bad


def _adjacent(sc: ScaledDrawing, a: int, b: int) -> bool:
    return (
        sc.edge_u[a] == sc.edge_u[b]
        or sc.edge_u[a] == sc.edge_v[b]
        or sc.edge_v[a] == sc.edge_u[b]
        or sc.edge_v[a] == sc.edge_v[b]
    )


def _scan_python(sc: ScaledDrawing, mode: int, labels,
                 focus: int = -1) -> ScanResult:
    flagged = []
    total = 0
    m = sc.m
    for a in range(m):
        for b in range(a + 1, m):
            if mode == MODE_SETS and labels[a] + labels[b] != 3:
                continue
            if mode == MODE_ONE and a != focus and b != focus:
                continue
            cnt, bad = _pair_scan_py(sc, a, b)
            total += cnt
            if mode == MODE_SETS:
                if cnt > 0 or bad > 0:
                    flagged.append((a, b, FLAG_CROSSING if cnt else bad))
                continue
            if bad:
                flagged.append((a, b, bad))
            if cnt > 0 and _adjacent(sc, a, b):
                flagged.append((a, b, FLAG_MULTI))
            elif cnt > 1:
                flagged.append((a, b, FLAG_MULTI))
    return ScanResult(flagged, total, "python")


# ---------------------------------------------------------------------------
# numba backend


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _kernel_scan(sx0, sy0, sx1, sy1, ptr, fvid, lvid, eu, ev, L, mode,
                     labels, focus, viol):  # pragma: no cover - compiled
        m = ptr.shape[0] - 1
        nv = 0
        total = 0
        vmax = viol.shape[0]
        for a in range(m):
            pa0, pa1 = ptr[a], ptr[a + 1]
            afx, afy = sx0[pa0], sy0[pa0]
            alx, aly = sx1[pa1 - 1], sy1[pa1 - 1]
            for b in range(a + 1, m):
                if mode == 1 and labels[a] + labels[b] != 3:
                    continue
                if mode == 2 and a != focus and b != focus:
                    continue
                pb0, pb1 = ptr[b], ptr[b + 1]
                bfx, bfy = sx0[pb0], sy0[pb0]
                blx, bly = sx1[pb1 - 1], sy1[pb1 - 1]
                cnt = 0
                bad = 0
                for ti in range(3):
                    t = (ti - 1) * L
                    if blx + t < afx or bfx + t > alx:
                        continue
                    i, j = pa0, pb0
                    while i < pa1 and j < pb1:
                        ax0, ax1 = sx0[i], sx1[i]
                        bx0, bx1 = sx0[j] + t, sx1[j] + t
                        if ax1 < bx0:
                            i += 1
                            continue
                        if bx1 < ax0:
                            j += 1
                            continue
                        ay0, ay1 = sy0[i], sy1[i]
                        by0, by1 = sy0[j], sy1[j]
                        o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
                        o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
                        o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
                        o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
                        s1 = (o1 > 0) - (o1 < 0)
                        s2 = (o2 > 0) - (o2 < 0)
                        s3 = (o3 > 0) - (o3 < 0)
                        s4 = (o4 > 0) - (o4 < 0)
                        if s1 * s2 < 0 and s3 * s4 < 0:
                            cnt += 1
                        elif o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
                            if o1 == 0 and o2 == 0 and max(ax0, bx0) < min(ax1, bx1):
                                if bad < 2:
                                    bad = 2
                            for c in range(4):
                                if c == 0:
                                    px, py = bx0, by0
                                    hit = o1 == 0 and ax0 <= bx0 <= ax1
                                elif c == 1:
                                    px, py = bx1, by1
                                    hit = o2 == 0 and ax0 <= bx1 <= ax1
                                elif c == 2:
                                    px, py = ax0, ay0
                                    hit = o3 == 0 and bx0 <= ax0 <= bx1
                                else:
                                    px, py = ax1, ay1
                                    hit = o4 == 0 and bx0 <= ax1 <= bx1
                                if not hit:
                                    continue
                                va = -1
                                if px == afx and py == afy:
                                    va = fvid[a]
                                elif px == alx and py == aly:
                                    va = lvid[a]
                                vb = -1
                                if px - t == bfx and py == bfy:
                                    vb = fvid[b]
                                elif px - t == blx and py == bly:
                                    vb = lvid[b]
                                if va >= 0 and vb >= 0 and va == vb:
                                    continue
                                if va >= 0 or vb >= 0:
                                    if bad < 3:
                                        bad = 3
                                else:
                                    if bad < 2:
                                        bad = 2
                        if ax1 < bx1:
                            i += 1
                        elif bx1 < ax1:
                            j += 1
                        else:
                            i += 1
                            j += 1
                total += cnt
                if mode == 1:
                    if cnt > 0 or bad > 0:
                        if nv < vmax:
                            viol[nv, 0] = a
                            viol[nv, 1] = b
                            viol[nv, 2] = 6 if cnt > 0 else bad
                        nv += 1
                    continue
                if bad > 0:
                    if nv < vmax:
                        viol[nv, 0] = a
                        viol[nv, 1] = b
                        viol[nv, 2] = bad
                    nv += 1
                adj = (eu[a] == eu[b] or eu[a] == ev[b]
                       or ev[a] == eu[b] or ev[a] == ev[b])
                if (cnt > 0 and adj) or cnt > 1:
                    if nv < vmax:
                        viol[nv, 0] = a
                        viol[nv, 1] = b
                        viol[nv, 2] = 1
                    nv += 1
        return nv, total

    @njit(cache=True, nogil=True, inline="always")
    def _mix64(z):  # pragma: no cover - compiled
        z = (z + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    @njit(cache=True, nogil=True)
    def _kernel_hashes(sx0, sy0, sx1, sy1, ptr, L, out_hash, out_pair,
                       collect_pairs):  # pragma: no cover - compiled
        """Second pass: canonical hash of every crossing point."""
        m = ptr.shape[0] - 1
        k = 0
        kmax = out_hash.shape[0]
        for a in range(m):
            pa0, pa1 = ptr[a], ptr[a + 1]
            afx = sx0[pa0]
            alx = sx1[pa1 - 1]
            for b in range(a + 1, m):
                pb0, pb1 = ptr[b], ptr[b + 1]
                bfx = sx0[pb0]
                blx = sx1[pb1 - 1]
                for ti in range(3):
                    t = (ti - 1) * L
                    if blx + t < afx or bfx + t > alx:
                        continue
                    i, j = pa0, pb0
                    while i < pa1 and j < pb1:
                        ax0, ax1 = sx0[i], sx1[i]
                        bx0, bx1 = sx0[j] + t, sx1[j] + t
                        if ax1 < bx0:
                            i += 1
                            continue
                        if bx1 < ax0:
                            j += 1
                            continue
                        ay0, ay1 = sy0[i], sy1[i]
                        by0, by1 = sy0[j], sy1[j]
                        o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
                        o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
                        o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
                        o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
                        s1 = (o1 > 0) - (o1 < 0)
                        s2 = (o2 > 0) - (o2 < 0)
                        s3 = (o3 > 0) - (o3 < 0)
                        s4 = (o4 > 0) - (o4 < 0)
                        if s1 * s2 < 0 and s3 * s4 < 0:
                            rx, ry = ax1 - ax0, ay1 - ay0
                            sx, sy = bx1 - bx0, by1 - by0
                            den = rx * sy - ry * sx
                            tn = (bx0 - ax0) * sy - (by0 - ay0) * sx
                            if den < 0:
                                den = -den
                                tn = -tn
                            nx = ax0 * den + rx * tn
                            ny = ay0 * den + ry * tn
                            nx = nx % (L * den)  # cylinder-normalize x
                            g = math.gcd(math.gcd(nx, abs(ny)), den)
                            nx //= g
                            ny //= g
                            dd = den // g
                            h = _mix64(_mix64(_mix64(np.uint64(nx))
                                              ^ np.uint64(ny)) ^ np.uint64(dd))
                            if k < kmax:
                                out_hash[k] = h
                                if collect_pairs:
                                    out_pair[k] = a * (1 << 32) + b
                            k += 1
                        if ax1 < bx1:
                            i += 1
                        elif bx1 < ax1:
                            j += 1
                        else:
                            i += 1
                            j += 1
        return k


def _vid_code(sc: ScaledDrawing) -> dict:
    # vertex ids are arbitrary ints; map to dense codes for the kernel
    if not hasattr(sc, "_vid_code_cache"):
        sc._vid_code_cache = {v: i for i, v in enumerate(sc.vid)}
    return sc._vid_code_cache


def _scan_numba(sc: ScaledDrawing, mode: int, labels,
                focus: int = -1) -> ScanResult:
    code = _vid_code(sc)
    arrs = sc.np_arrays()
    eu = np.array([code[u] for u in sc.edge_u], dtype=np.int64)
    ev = np.array([code[v] for v in sc.edge_v], dtype=np.int64)
    fv = np.array([code[u] for u in sc.fvid], dtype=np.int64)
    lv = np.array([code[u] for u in sc.lvid], dtype=np.int64)
    lab = np.array(labels if labels is not None else [0] * sc.m, dtype=np.int64)
    vmax = 1 << 17
    viol = np.zeros((vmax, 3), dtype=np.int64)
    nv, total = _kernel_scan(
        arrs[0], arrs[1], arrs[2], arrs[3], arrs[4], fv, lv, eu, ev,
        sc.L, mode, lab, focus, viol,
    )
    stored = min(nv, vmax)
    flagged = [(int(viol[i, 0]), int(viol[i, 1]), int(viol[i, 2]))
               for i in range(stored)]
    return ScanResult(flagged, int(total), "numba", truncated=nv > vmax)


# ---------------------------------------------------------------------------
# numpy backend: bulk orientation filter, unusual pairs re-checked exactly


def _scan_numpy(sc: ScaledDrawing, mode: int, labels,
                focus: int = -1) -> ScanResult:
    sx0, sy0, sx1, sy1, ptr, _, _ = sc.np_arrays()
    m = sc.m
    seg_edge = np.repeat(np.arange(m, dtype=np.int64), np.diff(ptr))
    lab = np.array(labels if labels is not None else [0] * m, dtype=np.int64)
    eu = np.array([_vid_code(sc)[u] for u in sc.edge_u], dtype=np.int64)
    ev = np.array([_vid_code(sc)[v] for v in sc.edge_v], dtype=np.int64)
    L = sc.L
    flagged = []
    total = 0
    for a in range(m):
        if mode == MODE_ONE and a > focus:
            break
        lo = ptr[a + 1]
        if lo >= len(seg_edge):
            break
        tail_edge = seg_edge[lo:]
        if mode == MODE_SETS:
            if lab[a] == 0:
                continue
            keep = lab[tail_edge] == 3 - lab[a]
        elif mode == MODE_ONE and a != focus:
            keep = tail_edge == focus
        else:
            keep = np.ones(len(tail_edge), dtype=bool)
        if not keep.any():
            continue
        te = tail_edge[keep]
        tx0, ty0 = sx0[lo:][keep], sy0[lo:][keep]
        tx1, ty1 = sx1[lo:][keep], sy1[lo:][keep]
        cnts = np.zeros(m, dtype=np.int64)
        defer = np.zeros(m, dtype=bool)
        for i in range(ptr[a], ptr[a + 1]):
            ax0, ay0 = sx0[i], sy0[i]
            ax1, ay1 = sx1[i], sy1[i]
            for t in (-L, 0, L):
                w = (tx1 + t >= ax0) & (tx0 + t <= ax1)
                if not w.any():
                    continue
                bx0, by0 = tx0[w] + t, ty0[w]
                bx1, by1 = tx1[w] + t, ty1[w]
                o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
                o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
                o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
                o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
                s1, s2 = np.sign(o1), np.sign(o2)
                s3, s4 = np.sign(o3), np.sign(o4)
                proper = (s1 * s2 < 0) & (s3 * s4 < 0)
                zero = (o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0)
                we = te[w]
                if proper.any():
                    cnts += np.bincount(we[proper], minlength=m)
                if zero.any():
                    defer[we[zero]] = True
        defer_idx = np.nonzero(defer)[0]
        hot = np.nonzero(cnts)[0]
        for b in hot:
            if defer[b]:
                continue
            c = int(cnts[b])
            total += c
            if mode == MODE_SETS:
                flagged.append((a, int(b), FLAG_CROSSING))
                continue
            adj = eu[a] == eu[b] or eu[a] == ev[b] or ev[a] == eu[b] or ev[a] == ev[b]
            if (c > 0 and adj) or c > 1:
                flagged.append((a, int(b), FLAG_MULTI))
        for b in defer_idx:
            cnt, bad = _pair_scan_py(sc, a, int(b))
            total += cnt
            if mode == MODE_SETS:
                if cnt > 0 or bad > 0:
                    flagged.append((a, int(b), FLAG_CROSSING if cnt else bad))
                continue
            if bad:
                flagged.append((a, int(b), bad))
            if (cnt > 0 and _adjacent(sc, a, int(b))) or cnt > 1:
                flagged.append((a, int(b), FLAG_MULTI))
    return ScanResult(flagged, total, "numpy")


def scan_pairs(sc: ScaledDrawing, mode: int = MODE_ALL, labels=None,
               backend: Optional[str] = None, focus: int = -1) -> ScanResult:
    bk = backend_name(sc, backend)
    if bk == "numba":
        return _scan_numba(sc, mode, labels, focus)
    if bk == "numpy":
        return _scan_numpy(sc, mode, labels, focus)
    return _scan_python(sc, mode, labels, focus)


# ---------------------------------------------------------------------------
# crossing-point hashing for the three-edges-through-one-point check

_M64 = (1 << 64) - 1


def _mix64_py(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _canonical_hash_py(nx: int, ny: int, den: int, L: int) -> int:
    if den < 0:
        den, nx, ny = -den, -nx, -ny
    nx %= L * den
    g = math.gcd(math.gcd(nx, abs(ny)), den)
    nx //= g
    ny //= g
    den //= g
    return _mix64_py(_mix64_py(_mix64_py(nx & _M64) ^ (ny & _M64)) ^ den)


def _pair_hashes_py(sc: ScaledDrawing, a: int, b: int) -> list:
    """Canonical hashes of every proper crossing of edge pair (a, b)."""
    L = sc.L
    sx0, sy0, sx1, sy1 = sc.sx0, sc.sy0, sc.sx1, sc.sy1
    pa0, pa1 = sc.ptr[a], sc.ptr[a + 1]
    pb0, pb1 = sc.ptr[b], sc.ptr[b + 1]
    afx, alx = sx0[pa0], sx1[pa1 - 1]
    bfx, blx = sx0[pb0], sx1[pb1 - 1]
    out = []
    for t in (-L, 0, L):
        if blx + t < afx or bfx + t > alx:
            continue
        i, j = pa0, pb0
        while i < pa1 and j < pb1:
            ax0, ax1 = sx0[i], sx1[i]
            bx0, bx1 = sx0[j] + t, sx1[j] + t
            if ax1 < bx0:
                i += 1
                continue
            if bx1 < ax0:
                j += 1
                continue
            ay0, ay1 = sy0[i], sy1[i]
            by0, by1 = sy0[j], sy1[j]
            o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
            o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
            o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
            o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
            if ((o1 > 0) - (o1 < 0)) * ((o2 > 0) - (o2 < 0)) < 0 and \
               ((o3 > 0) - (o3 < 0)) * ((o4 > 0) - (o4 < 0)) < 0:
                rx, ry = ax1 - ax0, ay1 - ay0
                sx, sy = bx1 - bx0, by1 - by0
                den = rx * sy - ry * sx
                tn = (bx0 - ax0) * sy - (by0 - ay0) * sx
                out.append(_canonical_hash_py(ax0 * den + rx * tn,
                                              ay0 * den + ry * tn, den, L))
            if ax1 < bx1:
                i += 1
            elif bx1 < ax1:
                j += 1
            else:
                i += 1
                j += 1
    return out


def _hashes_python(sc: ScaledDrawing, collect_pairs: bool):
    hs, prs = [], []
    for a in range(sc.m):
        for b in range(a + 1, sc.m):
            for h in _pair_hashes_py(sc, a, b):
                hs.append(h)
                if collect_pairs:
                    prs.append((a, b))
    arr = np.array(hs, dtype=np.uint64) if hs else np.empty(0, dtype=np.uint64)
    return arr, prs


def _hashes_numpy(sc: ScaledDrawing, collect_pairs: bool):
    sx0, sy0, sx1, sy1, ptr, _, _ = sc.np_arrays()
    m = sc.m
    seg_edge = np.repeat(np.arange(m, dtype=np.int64), np.diff(ptr))
    L = sc.L
    chunks, pair_chunks = [], []
    for a in range(m):
        lo = ptr[a + 1]
        if lo >= len(seg_edge):
            break
        te = seg_edge[lo:]
        tx0, ty0 = sx0[lo:], sy0[lo:]
        tx1, ty1 = sx1[lo:], sy1[lo:]
        for i in range(ptr[a], ptr[a + 1]):
            ax0, ay0 = sx0[i], sy0[i]
            ax1, ay1 = sx1[i], sy1[i]
            for t in (-L, 0, L):
                w = (tx1 + t >= ax0) & (tx0 + t <= ax1)
                if not w.any():
                    continue
                bx0, by0 = tx0[w] + t, ty0[w]
                bx1, by1 = tx1[w] + t, ty1[w]
                o1 = (ax1 - ax0) * (by0 - ay0) - (ay1 - ay0) * (bx0 - ax0)
                o2 = (ax1 - ax0) * (by1 - ay0) - (ay1 - ay0) * (bx1 - ax0)
                o3 = (bx1 - bx0) * (ay0 - by0) - (by1 - by0) * (ax0 - bx0)
                o4 = (bx1 - bx0) * (ay1 - by0) - (by1 - by0) * (ax1 - bx0)
                proper = (np.sign(o1) * np.sign(o2) < 0) & \
                         (np.sign(o3) * np.sign(o4) < 0)
                if not proper.any():
                    continue
                rx, ry = ax1 - ax0, ay1 - ay0
                sx = (bx1 - bx0)[proper]
                sy = (by1 - by0)[proper]
                den = rx * sy - ry * sx
                tn = ((bx0 - ax0)[proper]) * sy - ((by0 - ay0)[proper]) * sx
                neg = den < 0
                den = np.where(neg, -den, den)
                tn = np.where(neg, -tn, tn)
                nx = ax0 * den + rx * tn
                ny = ay0 * den + ry * tn
                nx = nx % (L * den)
                g = np.gcd(np.gcd(nx, np.abs(ny)), den)
                nx //= g
                ny //= g
                dd = den // g
                h = _mix64_np(_mix64_np(_mix64_np(nx.astype(np.uint64))
                                        ^ ny.astype(np.uint64))
                              ^ dd.astype(np.uint64))
                chunks.append(h)
                if collect_pairs:
                    eb = te[w][proper]
                    pair_chunks.append(a * (1 << 32) + eb.astype(np.int64))
    hs = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.uint64)
    if collect_pairs:
        pk = (np.concatenate(pair_chunks) if pair_chunks
              else np.empty(0, dtype=np.int64))
        return hs, [(int(p) >> 32, int(p) & 0xFFFFFFFF) for p in pk]
    return hs, []


def _hashes_numba(sc: ScaledDrawing, total: int, collect_pairs: bool):
    arrs = sc.np_arrays()
    out_hash = np.empty(total, dtype=np.uint64)
    out_pair = np.empty(total if collect_pairs else 1, dtype=np.int64)
    k = _kernel_hashes(arrs[0], arrs[1], arrs[2], arrs[3], arrs[4],
                       sc.L, out_hash, out_pair, collect_pairs)
    assert k == total
    if collect_pairs:
        return out_hash, [(int(p) >> 32, int(p) & 0xFFFFFFFF) for p in out_pair]
    return out_hash, []


def find_concurrences(sc: ScaledDrawing, total_crossings: int,
                      backend: Optional[str] = None) -> list:
    """Points where three or more edges cross pairwise at one spot.

    Returns [(point, edge_indices)] with the point in cylinder coordinates
    as a Fraction pair. Hash-collision candidates are confirmed with exact
    rational intersection points, so false positives cannot leak through.
    """
    from .geometry import crossings

    bk = backend_name(sc, backend)
    if bk != "python" and not sc.point_safe:
        bk = "python"
    if bk == "numba":
        hs, _ = _hashes_numba(sc, total_crossings, False)
    elif bk == "numpy":
        hs, _ = _hashes_numpy(sc, False)
    else:
        hs, _ = _hashes_python(sc, False)
    if len(hs) < 2:
        return []
    hs.sort(kind="stable")
    dupmask = hs[1:] == hs[:-1]
    if not dupmask.any():
        return []
    wanted = np.unique(hs[1:][dupmask])
    if bk == "numba":
        hs2, pairs = _hashes_numba(sc, total_crossings, True)
    elif bk == "numpy":
        hs2, pairs = _hashes_numpy(sc, True)
    else:
        hs2, pairs = _hashes_python(sc, True)
    cand = np.isin(hs2, wanted)
    suspect_pairs = sorted({pairs[i] for i in np.nonzero(cand)[0]})
    at_point: dict = {}
    for a, b in suspect_pairs:
        ea, eb = sc.drawing.edges[a], sc.drawing.edges[b]
        try:
            pts = crossings(ea, eb)
        except DegenerateError:
            # touching pair; reported through the scan path, not here
            continue
        for (px, py) in pts:
            key = (px % 1, py)
            at_point.setdefault(key, set()).update((a, b))
    out = []
    for key, edges in sorted(at_point.items()):
        if len(edges) >= 3:
            out.append(((key[0], key[1]), tuple(sorted(edges))))
    return out


# ---------------------------------------------------------------------------
# vertices lying on edges they do not belong to


def _vertex_hit(sc: ScaledDrawing, vi: int, e: int) -> bool:
    L = sc.L
    py = sc.vy[vi]
    v = sc.vid[vi]
    pa0, pa1 = sc.ptr[e], sc.ptr[e + 1]
    for t in (-L, 0, L):
        px = sc.vx[vi] + t
        for i in range(pa0, pa1):
            if not (sc.sx0[i] <= px <= sc.sx1[i]):
                continue
            o = (sc.sx1[i] - sc.sx0[i]) * (py - sc.sy0[i]) - \
                (sc.sy1[i] - sc.sy0[i]) * (px - sc.sx0[i])
            if o != 0:
                continue
            if px == sc.sx0[pa0] and py == sc.sy0[pa0] and v == sc.fvid[e]:
                continue
            if px == sc.sx1[pa1 - 1] and py == sc.sy1[pa1 - 1] \
                    and v == sc.lvid[e]:
                continue
            return True
    return False


def vertices_on_edges(sc: ScaledDrawing) -> list:
    """(vertex_index, edge_index) for every vertex sitting on a foreign
    edge or on the interior of an incident one."""
    out = []
    if not sc.orient_safe:
        for vi in range(len(sc.vid)):
            for e in range(sc.m):
                if _vertex_hit(sc, vi, e):
                    out.append((vi, e))
        return out
    sx0, sy0, sx1, sy1, ptr, _, _ = sc.np_arrays()
    seg_edge = np.repeat(np.arange(sc.m, dtype=np.int64), np.diff(ptr))
    L = sc.L
    for vi in range(len(sc.vid)):
        py = np.int64(sc.vy[vi])
        hits = np.zeros(sc.m, dtype=bool)
        for t in (0, L):  # lift x of all points is positive, t=-L never hits
            px = np.int64(sc.vx[vi] + t)
            w = (sx0 <= px) & (px <= sx1)
            if not w.any():
                continue
            o = (sx1[w] - sx0[w]) * (py - sy0[w]) - \
                (sy1[w] - sy0[w]) * (px - sx0[w])
            hits[seg_edge[w][o == 0]] = True
        for e in np.nonzero(hits)[0]:
            if _vertex_hit(sc, vi, int(e)):  # excludes its own endpoints
                out.append((vi, int(e)))
    return out
