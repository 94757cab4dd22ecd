"""Exact geometry of x-monotone edges on the unit-circumference cylinder.

Coordinates live on the cylinder C = S1 x R: the x coordinate is angular in
[0, 1), y is unbounded. Edges are piecewise-linear x-monotone curves given in
lift coordinates (the universal cover, x in R), so every edge is a polyline
with strictly increasing x and total x-extent below 1. An edge either stays
inside the fundamental window (direct) or crosses the cut line x = 0 once
(wrapping); a wrapping edge between u and v with x_u < x_v runs from
(x_v, y_v) to (x_u + 1, y_u).

Everything in this module is exact: all coordinates are `fractions.Fraction`
and every predicate is decided by integer sign computations. Because each
edge spans less than one period, two lift polylines can only meet when one is
translated by t in {-1, 0, +1} periods; this is asserted where it is used,
not silently assumed.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor
from operator import attrgetter
from typing import Iterable, Optional, Sequence

from .errors import DegenerateError, EventAtCutError, NotCircularError

Rational = Fraction
Point = tuple[Fraction, Fraction]

ONE = Fraction(1)
ZERO = Fraction(0)


class Relation(enum.Enum):
    """Vertical-order relation between two curves (or a point and a curve)."""

    BELOW = "below"
    ABOVE = "above"
    NOT_RELATED = "not_related"
    CROSSING = "crossing"


@dataclass(frozen=True)
class Vertex:
    id: int
    x: Fraction
    y: Fraction

    @property
    def point(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class EdgeCurve:
    """An edge between vertices u and v (x_u < x_v) as a lift polyline.

    Direct edge: polyline from (x_u, y_u) to (x_v, y_v).
    Wrapping edge: polyline from (x_v, y_v) to (x_u + 1, y_u); it crosses the
    lift line x = 1 (the cut) in its interior.
    """

    u: int
    v: int
    circular: bool
    points: tuple[Point, ...]

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def first(self) -> Point:
        return self.points[0]

    @property
    def last(self) -> Point:
        return self.points[-1]

    @property
    def span(self) -> Fraction:
        return self.points[-1][0] - self.points[0][0]

    @property
    def first_vid(self) -> int:
        return self.v if self.circular else self.u

    @property
    def last_vid(self) -> int:
        return self.u if self.circular else self.v

    @cached_property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(p[0] for p in self.points)

    @cached_property
    def arc(self) -> tuple[Fraction, Fraction]:
        """Closed x-extent on the cylinder as (start in [0,1), length)."""
        return (self.points[0][0] % 1, self.span)

    @cached_property
    def ybounds(self) -> tuple[Fraction, Fraction]:
        ys = [p[1] for p in self.points]
        return (min(ys), max(ys))

    def terminal_labels(self) -> tuple[object, object]:
        return (("v", self.first_vid), ("v", self.last_vid))


@dataclass(frozen=True)
class CurvePiece:
    """A contiguous sub-polyline of an edge, used for cut-line splitting."""

    points: tuple[Point, ...]
    label_first: object
    label_last: object

    @property
    def span(self) -> Fraction:
        return self.points[-1][0] - self.points[0][0]

    @property
    def arc(self) -> tuple[Fraction, Fraction]:
        return (self.points[0][0] % 1, self.span)

    @property
    def ybounds(self) -> tuple[Fraction, Fraction]:
        ys = [p[1] for p in self.points]
        return (min(ys), max(ys))

    def terminal_labels(self) -> tuple[object, object]:
        return (self.label_first, self.label_last)


@dataclass(frozen=True)
class Drawing:
    """A set of vertices with distinct angular positions plus edge curves.

    Vertices are kept sorted by x. Usually the edge set is complete; induced
    sub-drawings keep original vertex ids.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[EdgeCurve, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_by_id(self) -> dict[int, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_by_pair(self) -> dict[tuple[int, int], EdgeCurve]:
        return {e.pair: e for e in self.edges}

    @cached_property
    def pos_by_id(self) -> dict[int, int]:
        """Vertex id -> 1-based rank in x order."""
        return {v.id: i + 1 for i, v in enumerate(self.vertices)}

    @cached_property
    def all_circular(self) -> bool:
        return all(map(attrgetter("circular"), self.edges))

    def vertex_at(self, pos: int) -> Vertex:
        """1-based positional access in x order."""
        return self.vertices[pos - 1]

    def edge_between(self, a: int, b: int) -> EdgeCurve:
        e = self.edge_by_pair.get((a, b)) or self.edge_by_pair.get((b, a))
        if e is None:
            raise KeyError(f"no edge between vertices {a} and {b}")
        return e

    @property
    def complete(self) -> bool:
        n = self.n
        return len(self.edges) == n * (n - 1) // 2

    def induced(self, ids: Iterable[int]) -> "Drawing":
        keep = set(ids)
        vs = tuple(v for v in self.vertices if v.id in keep)
        es = tuple(e for e in self.edges if e.u in keep and e.v in keep)
        return Drawing(vs, es)


def new_drawing(vertices: Sequence[Vertex], edges: Sequence[EdgeCurve]) -> Drawing:
    vs = tuple(sorted(vertices, key=lambda v: v.x))
    es = tuple(sorted(edges, key=lambda e: e.pair))
    return Drawing(vs, es)


def is_flag(d: Drawing) -> bool:
    """True iff the drawing is complete and every edge wraps."""
    return d.complete and d.n >= 2 and d.all_circular


# ---------------------------------------------------------------------------
# point evaluation


def _lift_of(e: EdgeCurve | CurvePiece, x: Fraction) -> Optional[Fraction]:
    """The lift-frame x of cylinder position x on the curve, or None when x
    is outside its closed x-extent. 0 <= x < 1 required."""
    if not (0 <= x < 1):
        raise ValueError("cylinder x must lie in [0, 1)")
    x0, x1 = e.points[0][0], e.points[-1][0]
    if x0 <= x <= x1:
        return x
    if x0 <= x + 1 <= x1:
        return x + 1
    return None


def _segment_index(e: EdgeCurve | CurvePiece, lift_x: Fraction) -> int:
    pts = e.points
    xs = e.xs if isinstance(e, EdgeCurve) else [p[0] for p in pts]
    i = bisect_right(xs, lift_x) - 1
    return min(i, len(pts) - 2)


def eval_at(e: EdgeCurve | CurvePiece, x: Fraction) -> Optional[Fraction]:
    """y of the curve over cylinder position x, or None when x is outside
    the curve's closed x-extent. 0 <= x < 1 required."""
    lift = _lift_of(e, x)
    if lift is None:
        return None
    return _eval_lift(e, lift)


def _eval_lift(e: EdgeCurve | CurvePiece, lift_x: Fraction) -> Fraction:
    pts = e.points
    i = _segment_index(e, lift_x)
    (ax, ay), (bx, by) = pts[i], pts[i + 1]
    if lift_x == ax:
        return ay
    return ay + (by - ay) * (lift_x - ax) / (bx - ax)


def _eval_num_den(e: EdgeCurve | CurvePiece, lift_x: Fraction) -> tuple[int, int]:
    """y over lift_x as an unreduced integer num/den pair, den > 0.

    Cross-multiplied evaluation; skipping Fraction normalization makes this
    several times cheaper than :func:`_eval_lift` and it only ever feeds
    sign comparisons."""
    pts = e.points
    i = _segment_index(e, lift_x)
    (ax, ay), (bx, by) = pts[i], pts[i + 1]
    un = bx.numerator * ax.denominator - ax.numerator * bx.denominator
    ud = bx.denominator * ax.denominator
    vn = by.numerator * ay.denominator - ay.numerator * by.denominator
    vd = by.denominator * ay.denominator
    wn = lift_x.numerator * ax.denominator - ax.numerator * lift_x.denominator
    wd = lift_x.denominator * ax.denominator
    num = ay.numerator * vd * wd * un + ay.denominator * vn * wn * ud
    den = ay.denominator * vd * wd * un
    return num, den


def _seg_side(px: Fraction, py: Fraction, a: Point, b: Point) -> int:
    """Sign of py - y(px) on the segment a -> b, for ax <= px <= bx and
    ax < bx. Exact: cross-multiplied integers, no Fraction churn."""
    tn = py.numerator * a[1].denominator - a[1].numerator * py.denominator
    un = b[0].numerator * a[0].denominator - a[0].numerator * b[0].denominator
    vn = b[1].numerator * a[1].denominator - a[1].numerator * b[1].denominator
    wn = px.numerator * a[0].denominator - a[0].numerator * px.denominator
    lhs = tn * un * b[1].denominator * px.denominator
    rhs = vn * wn * py.denominator * b[0].denominator
    return (lhs > rhs) - (lhs < rhs)


def point_relation(p: Point, e: EdgeCurve) -> Relation:
    """Vertical order of point p against edge e; NOT_RELATED when no common
    vertical line exists. Raises DegenerateError when p lies on e."""
    lift = _lift_of(e, p[0])
    if lift is None:
        return Relation.NOT_RELATED
    pts = e.points
    i = _segment_index(e, lift)
    s = _seg_side(lift, p[1], pts[i], pts[i + 1])
    if s < 0:
        return Relation.BELOW
    if s > 0:
        return Relation.ABOVE
    raise DegenerateError(f"point {p} lies on edge {e.pair}")


# ---------------------------------------------------------------------------
# pairwise crossing scan (exact, Fraction arithmetic)


def _orient_sign(p: Point, q: Point, r: Point) -> int:
    """Sign of the turn p -> q -> r, exact over the rational coordinates.
    Cross-multiplied: only the sign is ever needed by the scan."""
    an = q[0].numerator * p[0].denominator - p[0].numerator * q[0].denominator
    bn = r[1].numerator * p[1].denominator - p[1].numerator * r[1].denominator
    cn = q[1].numerator * p[1].denominator - p[1].numerator * q[1].denominator
    en = r[0].numerator * p[0].denominator - p[0].numerator * r[0].denominator
    lhs = an * bn * q[1].denominator * r[0].denominator
    rhs = cn * en * q[0].denominator * r[1].denominator
    return (lhs > rhs) - (lhs < rhs)


class _Contact:
    __slots__ = ("point", "a_label", "b_label")

    def __init__(self, point, a_label, b_label):
        self.point = point
        self.a_label = a_label
        self.b_label = b_label


def _terminal_label(pts, labels, p):
    if p == pts[0]:
        return labels[0]
    if p == pts[-1]:
        return labels[1]
    return None


def _scan_pair(a, b):
    """All cylinder intersections between two x-monotone carriers.

    Returns (crossings, contacts): proper transversal crossings as lift
    points in a's frame, and touching contacts for the caller to judge.
    Raises DegenerateError on collinear overlap.
    """
    apts, bpts = a.points, b.points
    assert a.span < 1 and b.span < 1, "carrier spans a full period"
    crossings: list[Point] = []
    aylo, ayhi = a.ybounds
    bylo, byhi = b.ybounds
    if ayhi < bylo or byhi < aylo:
        # strictly separated y-ranges can neither cross nor touch
        return crossings, []
    albl, blbl = a.terminal_labels(), b.terminal_labels()
    contacts: dict[tuple[Fraction, Fraction], _Contact] = {}

    ax_first, ax_last = apts[0][0], apts[-1][0]
    for t in (-1, 0, 1):
        if bpts[-1][0] + t < ax_first or bpts[0][0] + t > ax_last:
            continue
        _scan_window(apts, bpts, t, albl, blbl, crossings, contacts)
    return crossings, list(contacts.values())


def _scan_window(apts, bpts, t, albl, blbl, crossings, contacts):
    na, nb = len(apts), len(bpts)
    bxs = [p[0] + t for p in bpts]
    i = j = 0
    while i < na - 1 and j < nb - 1:
        ax0, ax1 = apts[i][0], apts[i + 1][0]
        bx0, bx1 = bxs[j], bxs[j + 1]
        if ax1 < bx0:
            i += 1
            continue
        if bx1 < ax0:
            j += 1
            continue
        A0, A1 = apts[i], apts[i + 1]
        B0 = (bx0, bpts[j][1])
        B1 = (bx1, bpts[j + 1][1])
        o1 = _orient_sign(A0, A1, B0)
        o2 = _orient_sign(A0, A1, B1)
        o3 = _orient_sign(B0, B1, A0)
        o4 = _orient_sign(B0, B1, A1)
        if o1 * o2 < 0 and o3 * o4 < 0:
            crossings.append(_segment_meet(A0, A1, B0, B1))
        elif o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
            if o1 == 0 and o2 == 0:
                # same supporting line; any positive x-overlap is an overlap
                if max(ax0, bx0) < min(ax1, bx1):
                    raise DegenerateError("collinear overlapping segments")
            for P, on_other in (
                (B0, o1 == 0 and ax0 <= bx0 <= ax1),
                (B1, o2 == 0 and ax0 <= bx1 <= ax1),
                (A0, o3 == 0 and bx0 <= A0[0] <= bx1),
                (A1, o4 == 0 and bx0 <= A1[0] <= bx1),
            ):
                if not on_other:
                    continue
                key = (P[0], P[1])
                if key not in contacts:
                    a_lab = _terminal_label(apts, albl, P)
                    b_lab = _terminal_label(bpts, blbl, (P[0] - t, P[1]))
                    contacts[key] = _Contact(P, a_lab, b_lab)
        # advance the segment that ends first
        if ax1 < bx1:
            i += 1
        elif bx1 < ax1:
            j += 1
        else:
            i += 1
            j += 1


def _segment_meet(A0, A1, B0, B1) -> Point:
    rx, ry = A1[0] - A0[0], A1[1] - A0[1]
    sx, sy = B1[0] - B0[0], B1[1] - B0[1]
    den = rx * sy - ry * sx
    tt = ((B0[0] - A0[0]) * sy - (B0[1] - A0[1]) * sx) / den
    return (A0[0] + rx * tt, A0[1] + ry * tt)


def crossings(e: EdgeCurve | CurvePiece, f: EdgeCurve | CurvePiece) -> list[Point]:
    """Transversal intersection points of e and f on the cylinder, reported
    in e's lift frame sorted by x. Contacts at a shared endpoint are fine and
    excluded; every other touching configuration raises DegenerateError."""
    cross, contacts = _scan_pair(e, f)
    for c in contacts:
        if c.a_label is None or c.b_label is None or c.a_label != c.b_label:
            raise DegenerateError(
                f"curves touch at {c.point} without a shared endpoint"
            )
    return sorted(cross)


def crossing_count(e, f) -> int:
    return len(crossings(e, f))


# ---------------------------------------------------------------------------
# vertical-order relation


def _arc_intersect(a, b):
    """Intersection of two open arcs (start, length) on the unit circle.
    Returns up to two open arcs."""
    sa, la = a
    sb, lb = b
    d = (sb - sa) % 1
    out = []
    for off in (d, d - 1):
        lo = max(ZERO, off)
        hi = min(la, off + lb)
        if lo < hi:
            out.append(((sa + lo) % 1, hi - lo))
    return out


def _interior_events(e: EdgeCurve, arc_start: Fraction, arc_len: Fraction):
    """Offsets (within the arc) of e's breakpoints strictly inside the arc."""
    out = []
    for p in e.points[1:-1]:
        rel = (p[0] - arc_start) % 1
        if 0 < rel < arc_len:
            out.append(rel)
    return out


def relation(e: EdgeCurve | CurvePiece, f: EdgeCurve | CurvePiece) -> Relation:
    """Vertical-order relation of two distinct curves (edges or pieces).

    CROSSING when they cross; BELOW/ABOVE when every common vertical line
    orders them the same way (e under f / e over f); NOT_RELATED when no
    common line meets both relative interiors or the order flips between
    the (at most two) common arcs.
    """
    if e is f or (isinstance(e, EdgeCurve) and isinstance(f, EdgeCurve)
                  and e.pair == f.pair):
        raise ValueError("relation of a curve with itself")
    elo, ehi = e.ybounds
    flo, fhi = f.ybounds
    if ehi < flo or fhi < elo:
        # strictly separated y-ranges fix the vertical order outright
        if not _arc_intersect(e.arc, f.arc):
            return Relation.NOT_RELATED
        return Relation.BELOW if ehi < flo else Relation.ABOVE
    if crossings(e, f):
        return Relation.CROSSING
    arcs = _arc_intersect(e.arc, f.arc)
    signs = set()
    for start, length in arcs:
        offs = sorted(
            set(_interior_events(e, start, length) + _interior_events(f, start, length))
        )
        bounds = [ZERO] + offs + [length]
        for lo, hi in zip(bounds, bounds[1:]):
            x = (start + (lo + hi) / 2) % 1
            le, lf = _lift_of(e, x), _lift_of(f, x)
            assert le is not None and lf is not None
            ne, de = _eval_num_den(e, le)
            nf, df = _eval_num_den(f, lf)
            t = ne * df - nf * de
            if t == 0:
                raise DegenerateError(f"edges {e.pair} and {f.pair} touch at x={x}")
            signs.add(1 if t < 0 else -1)
    if not signs:
        return Relation.NOT_RELATED
    if signs == {1}:
        return Relation.BELOW
    if signs == {-1}:
        return Relation.ABOVE
    return Relation.NOT_RELATED


# ---------------------------------------------------------------------------
# cut-line operations


def split_circular(e: EdgeCurve) -> tuple[CurvePiece, CurvePiece]:
    """Split a wrapping edge at the cut line into (negative, positive) parts.

    The positive part holds the points with cylinder x greater than x_v
    (lift x in [x_v, 1]); the negative part those with cylinder x smaller
    than x_u (lift x in [1, x_u + 1]). Both include the cut point."""
    if not e.circular:
        raise NotCircularError(f"edge {e.pair} does not wrap")
    pts = e.points
    for p in pts:
        if p[0] == 1:
            raise DegenerateError("polyline breakpoint exactly on the cut")
    i = 0
    while pts[i + 1][0] < 1:
        i += 1
    y_cut = _eval_lift(e, ONE)
    cut = (ONE, y_cut)
    pos = CurvePiece(pts[: i + 1] + (cut,), ("v", e.first_vid), ("cut", e.pair))
    neg = CurvePiece((cut,) + pts[i + 1 :], ("cut", e.pair), ("v", e.last_vid))
    return neg, pos


def cut_height(e: EdgeCurve) -> Fraction:
    """y at which a wrapping edge crosses the cut line x = 0."""
    if not e.circular:
        raise NotCircularError(f"edge {e.pair} does not wrap")
    return _eval_lift(e, ONE)


def recut(d: Drawing, a: Fraction) -> Drawing:
    """Rotate the angular origin to a: x' = (x - a) mod 1 for every point.

    The drawing is geometrically unchanged; edges are re-expressed in the new
    frame and may change between direct and wrapping. Raises EventAtCutError
    when a vertex, breakpoint, or crossing sits exactly at x = a."""
    a = Fraction(a) % 1
    for v in d.vertices:
        if v.x == a:
            raise EventAtCutError(f"vertex {v.id} lies on the new cut", a)
    for e in d.edges:
        for p in e.points[1:-1]:
            if p[0] % 1 == a:
                raise EventAtCutError(f"breakpoint of edge {e.pair} on the new cut", a)
    heights = []
    if a != 0:
        for e in d.edges:
            y = eval_at(e, a)
            if y is not None:
                heights.append((y, e.pair))
        heights.sort()
        for (y1, p1), (y2, p2) in zip(heights, heights[1:]):
            if y1 == y2:
                raise EventAtCutError(f"edges {p1} and {p2} cross on the new cut", a)

    new_vs = tuple(
        sorted(
            (Vertex(v.id, (v.x - a) % 1, v.y) for v in d.vertices),
            key=lambda v: v.x,
        )
    )
    new_es = []
    for e in d.edges:
        shifted = [(p[0] - a, p[1]) for p in e.points]
        k = floor(shifted[0][0])
        pts = tuple((x - k, y) for x, y in shifted)
        assert 0 < pts[0][0] < 1
        circ = pts[-1][0] > 1
        first_vid, last_vid = e.first_vid, e.last_vid
        if circ:
            u, v = last_vid, first_vid
        else:
            u, v = first_vid, last_vid
        new_es.append(EdgeCurve(u, v, circ, pts))
    out = new_drawing(new_vs, new_es)
    # representation sanity: endpoints must coincide with vertex positions
    for e in out.edges:
        vu, vv = out.vertex_by_id[e.u], out.vertex_by_id[e.v]
        assert vu.x < vv.x
        if e.circular:
            assert e.first == (vv.x, vv.y) and e.last == (vu.x + 1, vu.y)
        else:
            assert e.first == (vu.x, vu.y) and e.last == (vv.x, vv.y)
    return out


# ---------------------------------------------------------------------------
# rational helpers


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The smallest-denominator rational strictly inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    fl = floor(lo)
    if lo < fl + 1 < hi:
        return Fraction(fl + 1)
    lo2 = lo - fl
    hi2 = hi - fl
    if lo2 == 0:
        # interval (0, hi2): simplest is 1/ceil-ish
        return fl + Fraction(1, floor(1 / hi2) + 1)
    inner = simplest_between(1 / hi2, 1 / lo2)
    return fl + 1 / inner
