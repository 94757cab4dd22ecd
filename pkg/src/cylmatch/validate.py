"""Drawing validity: structural invariants plus pairwise general position.

A drawing passes when vertices sit at distinct angles strictly between the
cut line and its wrap-around, every polyline is x-monotone with span below
one full turn and endpoints matching its vertices, adjacent edges meet only
at the shared vertex, independent edges cross at most once and never touch,
no vertex lies on a foreign edge, nothing happens exactly on the cut line,
and no three edges pass through a common point.

The pairwise work runs on the integer-scaled kernels; every pair the kernel
flags is re-examined with exact rational arithmetic to produce the precise
violation kind and witness point, so reports are backend-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernels
from .errors import DegenerateError
from .geometry import Drawing, EdgeCurve, Point, _scan_pair, cut_height

KINDS = (
    "double-crossing",
    "tangency",
    "vertex-on-edge",
    "span>=1",
    "duplicate-x",
    "event-at-cut",
    "non-monotone",
    "concurrence",
    "endpoint-mismatch",
    "unknown-vertex",
    "duplicate-edge",
    "duplicate-vertex",
    "vertex-range",
)


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple
    point: Optional[Point] = None
    detail: str = ""

    def __str__(self) -> str:
        loc = ""
        if self.point is not None:
            loc = f" at ({self.point[0]}, {self.point[1]})"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{self.kind}: {self.ids}{loc}{extra}"


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)
    n: int = 0
    m: int = 0
    crossing_total: int = 0
    backend: str = ""
    truncated: bool = False

    def summary(self) -> str:
        head = "ok" if self.ok else f"INVALID ({len(self.violations)} violations)"
        return (f"{head}: n={self.n} m={self.m} "
                f"crossings={self.crossing_total} backend={self.backend}")


def _structural(d: Drawing, out: list) -> list:
    """Vertex and per-edge shape checks. Returns indices of edges that are
    sound enough for the pairwise kernel scan."""
    seen_x: dict = {}
    ids = set()
    for v in d.vertices:
        if v.id in ids:
            out.append(Violation("duplicate-vertex", (v.id,)))
        ids.add(v.id)
        if v.x == 0:
            out.append(Violation("event-at-cut", (v.id,), v.point,
                                 "vertex on the cut line"))
        elif not (0 < v.x < 1):
            out.append(Violation("vertex-range", (v.id,), v.point))
        if v.x in seen_x:
            out.append(Violation("duplicate-x", (seen_x[v.x], v.id), v.point))
        else:
            seen_x[v.x] = v.id
    sound = []
    seen_pairs = set()
    for i, e in enumerate(d.edges):
        pair = e.pair
        if pair in seen_pairs:
            out.append(Violation("duplicate-edge", pair))
            continue
        seen_pairs.add(pair)
        if e.u == e.v or e.u not in d.vertex_by_id or e.v not in d.vertex_by_id:
            out.append(Violation("unknown-vertex", pair))
            continue
        ok = True
        if len(e.points) < 2 or any(
            a[0] >= b[0] for a, b in zip(e.points, e.points[1:])
        ):
            out.append(Violation("non-monotone", pair))
            ok = False
        if ok and e.span >= 1:
            out.append(Violation("span>=1", pair, detail=f"span={e.span}"))
            ok = False
        if ok:
            vu, vv = d.vertex_by_id[e.u], d.vertex_by_id[e.v]
            if vu.x >= vv.x:
                out.append(Violation("endpoint-mismatch", pair,
                                     detail="u not left of v"))
                ok = False
            else:
                if e.circular:
                    want_first, want_last = vv.point, (vu.x + 1, vu.y)
                else:
                    want_first, want_last = vu.point, vv.point
                if e.first != want_first or e.last != want_last:
                    out.append(Violation("endpoint-mismatch", pair))
                    ok = False
        if ok:
            for p in e.points[1:-1]:
                if p[0].denominator == 1:
                    out.append(Violation("event-at-cut", pair, p,
                                         "breakpoint on the cut line"))
                    ok = False
                    break
        if ok:
            sound.append(i)
    return sound


def _classify_pair(ea: EdgeCurve, eb: EdgeCurve, out: list) -> None:
    """Exact re-examination of a kernel-flagged pair."""
    pa, pb = ea.pair, eb.pair
    try:
        cross, contacts = _scan_pair(ea, eb)
    except DegenerateError:
        out.append(Violation("tangency", (pa, pb),
                             detail="collinear overlap"))
        return
    for c in sorted(contacts, key=lambda c: c.point):
        la, lb, pt = c.a_label, c.b_label, c.point
        if la is not None and lb is not None and la == lb:
            continue  # shared endpoint
        if (la is None) != (lb is None):
            vid = (la or lb)[1]
            other = pb if la is not None else pa
            out.append(Violation("vertex-on-edge", (vid, other), pt))
        elif la is None and lb is None:
            out.append(Violation("tangency", (pa, pb), pt))
        else:
            out.append(Violation("vertex-on-edge", (la[1], lb[1]), pt,
                                 "two vertices coincide"))
    shared = set(pa) & set(pb)
    if shared and cross:
        out.append(Violation("double-crossing", (pa, pb), cross[0],
                             "adjacent edges cross"))
    elif len(cross) > 1:
        out.append(Violation("double-crossing", (pa, pb), cross[0],
                             f"{len(cross)} crossings"))


def validate(d: Drawing, backend: Optional[str] = None,
             concurrences: bool = True,
             restrict: Optional[set] = None) -> ValidationReport:
    """Full validity report for a drawing (complete or induced).

    restrict narrows the exact pairwise re-examination to flagged pairs
    touching the given edge pairs; callers repairing a known-good drawing
    edge by edge use it to skip re-proving the untouched part. The report
    is then only authoritative for the restricted pairs."""
    viols: list = []
    sound = _structural(d, viols)
    rep = ValidationReport(False, viols, n=d.n, m=len(d.edges))
    if not sound or len(sound) < 1:
        rep.ok = not viols
        rep.backend = "none"
        return rep

    sub = d if len(sound) == len(d.edges) else Drawing(
        d.vertices, tuple(d.edges[i] for i in sound)
    )
    sc = kernels.scale_drawing(sub)
    scan = kernels.scan_pairs(sc, kernels.MODE_ALL, backend=backend)
    rep.backend = scan.backend
    rep.truncated = scan.truncated
    rep.crossing_total = scan.total_crossings
    # canonical order keeps reports identical across backends
    for a, b in sorted({(a, b) for a, b, _ in scan.flagged}):
        if restrict is not None and not (
            {sub.edges[a].pair, sub.edges[b].pair} & restrict
        ):
            continue
        _classify_pair(sub.edges[a], sub.edges[b], viols)

    for vi, e in kernels.vertices_on_edges(sc):
        v = d.vertices[vi] if sub is d else sub.vertices[vi]
        viols.append(Violation("vertex-on-edge", (v.id, sub.edges[e].pair),
                               v.point))

    # circular edges meeting the cut line at the same height cross or touch
    # exactly on it; sorting the cut heights finds every such event
    heights = sorted(
        (cut_height(e), e.pair) for e in sub.edges if e.circular
    )
    for (y1, p1), (y2, p2) in zip(heights, heights[1:]):
        if y1 == y2:
            viols.append(Violation("event-at-cut", (p1, p2),
                                   (Fraction(0), y1),
                                   "edges meet on the cut line"))

    if concurrences:
        for pt, idxs in kernels.find_concurrences(
            sc, scan.total_crossings, backend=backend
        ):
            viols.append(Violation(
                "concurrence", tuple(sub.edges[i].pair for i in idxs), pt
            ))

    # exact classification can deduplicate into nothing for benign flags
    uniq = []
    seen = set()
    for v in viols:
        key = (v.kind, v.ids, v.point)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    rep.violations = uniq
    rep.ok = not uniq
    return rep


def cross_disjoint(d: Drawing, pairs_a, pairs_b,
                   backend: Optional[str] = None) -> list:
    """Offending pairs between two edge groups that must share no point
    (not even endpoints). Empty result means fully disjoint."""
    bad = []
    pa = [tuple(sorted(p)) for p in pairs_a]
    pb = [tuple(sorted(p)) for p in pairs_b]
    for x in pa:
        for y in pb:
            if set(x) & set(y):
                bad.append((x, y, "shared vertex"))
    label_of = {}
    for p in pa:
        label_of[p] = 1
    for p in pb:
        if label_of.get(p) == 1:
            bad.append((p, p, "edge in both groups"))
        label_of[p] = 2
    edges = [e for e in d.edges if e.pair in label_of]
    if not edges:
        return bad
    sub = Drawing(d.vertices, tuple(edges))
    sc = kernels.scale_drawing(sub)
    labels = [label_of[e.pair] for e in sub.edges]
    scan = kernels.scan_pairs(sc, kernels.MODE_SETS, labels, backend=backend)
    for a, b, _k in scan.flagged:
        bad.append((sub.edges[a].pair, sub.edges[b].pair, "crossing"))
    return bad


def pairwise_disjoint(d: Drawing, pairs) -> list:
    """Offending pairs within one small edge group that must be pairwise
    disjoint. Exact scan, intended for matchings (tens of edges)."""
    from .geometry import crossings

    es = [d.edge_between(*p) for p in pairs]
    bad = []
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            a, b = es[i], es[j]
            if set(a.pair) & set(b.pair):
                bad.append((a.pair, b.pair, "shared vertex"))
                continue
            try:
                if crossings(a, b):
                    bad.append((a.pair, b.pair, "crossing"))
            except DegenerateError:
                bad.append((a.pair, b.pair, "touching"))
    return bad
