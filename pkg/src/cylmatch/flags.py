"""Disjoint-edge extraction on flags.

A flag (complete drawing, every edge wrapping) always contains a large
set of pairwise disjoint edges, and this module constructs one: at
least ``guaranteed_size(n)`` edges, pairwise vertically related, each
pair carrying a witness for *why* it is related.  The construction
recurses on the vertex sides of a separating edge, or on the heavy
side of a good triplet, both found among the six leftmost vertices.

Witness kinds for a related pair ``e`` below ``f``:

    "a"  e lies wholly left of f (every endpoint of e left of every
         endpoint of f),
    "b"  f lies wholly left of e,
    "c"  some third edge g lies wholly left of both and separates their
         endpoints: e's endpoints under g, f's endpoints over g.

Witnesses stored in a :class:`ProperMatching` are advisory; use
:func:`check_proper` to re-derive everything from geometry alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .errors import DegenerateError, InvalidDrawingError, NotAFlagError
from .geometry import (
    Drawing,
    EdgeCurve,
    Relation,
    cut_height,
    is_flag,
    point_relation,
    relation,
)

SEPARATING_EDGE = "separating-edge"
GOOD_UPPER_TRIPLET = "good-upper-triplet"
GOOD_LOWER_TRIPLET = "good-lower-triplet"

WIT_BELOW_LEFT = "a"
WIT_ABOVE_LEFT = "b"
WIT_SEPARATOR = "c"

Pair = Tuple[int, int]


def guaranteed_size(n: int) -> int:
    """Disjoint edges promised for an n-vertex flag: 1 up to n=9, then
    ceil(n/25)+1."""
    if n < 2:
        raise ValueError(f"a flag needs at least 2 vertices, got {n}")
    if n <= 9:
        return 1
    return -(-n // 25) + 1


@dataclass(frozen=True)
class SideSets:
    """Vertices ranked past j, split by which side of edge (v_i, v_j)
    they sit on.  ``edge`` holds positions (x-ranks), the sets hold
    vertex ids."""

    edge: Tuple[int, int]
    vplus: frozenset
    vminus: frozenset

    @property
    def separating(self) -> bool:
        return len(self.vplus) > 1 and len(self.vminus) > 1


@dataclass(frozen=True)
class Structure:
    """A recursion anchor found among the six leftmost vertices.

    tag: SEPARATING_EDGE with positions (i, j), or GOOD_UPPER_TRIPLET /
    GOOD_LOWER_TRIPLET with positions (i, j, k).
    """

    tag: str
    positions: Tuple[int, ...]


@dataclass(frozen=True)
class Witness:
    """Reason a related matching pair cannot cross.  ``below``/``above``
    are edge pairs (vertex ids, left id first); ``separator`` is set for
    kind "c" only."""

    kind: str
    below: Pair
    above: Pair
    separator: Optional[Pair] = None


def _pair_key(a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    return (a, b) if a <= b else (b, a)


@dataclass
class ProperMatching:
    """Pairwise disjoint, pairwise related edges with per-pair witnesses.

    ``edges`` is ordered by height at the cut line, lowest first; every
    edge of a flag wraps, so each has a well-defined cut height.
    """

    edges: Tuple[Pair, ...]
    witnesses: Dict[Tuple[Pair, Pair], Witness] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.edges)

    def witness_for(self, a: Pair, b: Pair) -> Witness:
        return self.witnesses[_pair_key(a, b)]


# ---------------------------------------------------------------------------
# side sets and structure search


def side_sets(d: Drawing, i: int, j: int) -> SideSets:
    """Split the vertices ranked past j into those strictly above and
    strictly below the edge joining the i-th and j-th leftmost vertices.

    On a flag that edge wraps, so it passes over every x to the right of
    its left endpoint: each later vertex lands in exactly one set.
    """
    if not is_flag(d):
        raise NotAFlagError("side split needs a complete all-wrapping drawing")
    if not 1 <= i < j <= d.n:
        raise ValueError(f"need 1 <= i < j <= {d.n}, got ({i}, {j})")
    return _side_split(d, i, j)


def _side_split(d: Drawing, i: int, j: int, ctx=None) -> SideSets:
    e = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id)
    up: set = set()
    down: set = set()
    for v, r in _relations_past(d, e, j, ctx or _float_ctx(d)):
        (up if r is Relation.ABOVE else down).add(v.id)
    return SideSets((i, j), frozenset(up), frozenset(down))


_FILTER_U = 2.0 ** -53


def _float_ctx(d: Drawing):
    """Float image of the vertex coordinates plus max |y|, built once per
    drawing and shared by every side scan over it."""
    fx = [float(v.x) for v in d.vertices]
    fy = [float(v.y) for v in d.vertices]
    return fx, fy, max(map(abs, fy))


def _relations_past(d: Drawing, e: EdgeCurve, j: int, ctx):
    """(vertex, ABOVE/BELOW) for every vertex ranked past j against edge e.

    A float orientation with a conservative static error bound settles
    almost every vertex; anything inside the bound is re-decided by the
    exact rational predicate, so outcomes match point_relation exactly.
    """
    fx, fy, ymax = ctx
    pts = e.points
    sx = [float(p[0]) for p in pts]
    sy = [float(p[1]) for p in pts]
    m = max(2.0, ymax, max(map(abs, sy)))
    bound = 128.0 * _FILTER_U * m * m
    k, last = 0, len(pts) - 2
    # wrapping edges cover every x right of their left endpoint, so the
    # lift of each later vertex is its own x and one merge pointer walks
    # the segments; anything else goes through the general predicate
    fast = e.circular
    for s in range(j, d.n):
        v = d.vertices[s]
        if fast:
            px, py = fx[s], fy[s]
            while k < last and sx[k + 1] < px:
                k += 1
            det = (sx[k + 1] - sx[k]) * (py - sy[k]) \
                - (sy[k + 1] - sy[k]) * (px - sx[k])
            if det > bound:
                yield v, Relation.ABOVE
                continue
            if det < -bound:
                yield v, Relation.BELOW
                continue
        r = point_relation(v.point, e)
        if r is not Relation.ABOVE and r is not Relation.BELOW:
            raise InvalidDrawingError(
                f"vertex {v.id} shares no vertical line with edge "
                f"{e.pair}; the drawing is not a flag"
            )
        yield v, r


def _both_sides_reach(d: Drawing, i: int, j: int, quota: int, ctx) -> bool:
    """Do at least `quota` later vertices sit on each side of edge (i, j)?
    Stops scanning the moment the answer is known."""
    e = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id)
    up = down = 0
    left = d.n - j
    for _, r in _relations_past(d, e, j, ctx):
        if r is Relation.ABOVE:
            up += 1
        else:
            down += 1
        left -= 1
        if up >= quota and down >= quota:
            return True
        if up + left < quota or down + left < quota:
            return False
    return False


def _side_count_at_most(d: Drawing, i: int, j: int, rel: Relation,
                        limit: int, ctx) -> bool:
    """Do at most `limit` later vertices sit on the `rel` side of (i, j)?
    Stops at the first counterexample."""
    e = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id)
    c = 0
    for _, r in _relations_past(d, e, j, ctx):
        if r is rel:
            c += 1
            if c > limit:
                return False
    return True


def find_structure(d: Drawing) -> Structure:
    """Locate a recursion anchor among the six leftmost vertices.

    Tries, in deterministic order: separating edges (i, j) by lexicographic
    position, then good upper triplets (i, j, k), then good lower triplets.
    A valid flag with n >= 10 always contains one; failure to find any
    proves the input breaks the flag or simplicity contract.
    """
    if not is_flag(d):
        raise NotAFlagError("structure search needs a flag")
    if d.n < 10:
        raise ValueError(f"structure search needs n >= 10, got {d.n}")
    return _find_structure_impl(d)


def _find_structure_impl(d: Drawing, ctx=None) -> Structure:
    # the probes stop scanning once the verdict for a candidate is fixed,
    # so most of the n - j relation tests per pair never run
    if ctx is None:
        ctx = _float_ctx(d)
    for i, j in combinations(range(1, 7), 2):
        if _both_sides_reach(d, i, j, 2, ctx):
            return Structure(SEPARATING_EDGE, (i, j))

    def curve(a: int, b: int) -> EdgeCurve:
        return d.edge_between(d.vertex_at(a).id, d.vertex_at(b).id)

    rels: Dict[Tuple[int, int, int], Relation] = {}

    def rel3(i: int, j: int, k: int) -> Relation:
        # the upper and lower loops query the same (i, j, k) pairs
        if (i, j, k) not in rels:
            rels[(i, j, k)] = relation(curve(j, k), curve(i, j))
        return rels[(i, j, k)]

    for i, j, k in combinations(range(1, 7), 3):
        if (rel3(i, j, k) is Relation.BELOW
                and _side_count_at_most(d, j, k, Relation.ABOVE, 1, ctx)):
            return Structure(GOOD_UPPER_TRIPLET, (i, j, k))
    for i, j, k in combinations(range(1, 7), 3):
        if (rel3(i, j, k) is Relation.ABOVE
                and _side_count_at_most(d, j, k, Relation.BELOW, 1, ctx)):
            return Structure(GOOD_LOWER_TRIPLET, (i, j, k))

    raise InvalidDrawingError(
        "no separating edge or good triplet among the six leftmost "
        "vertices; the input is not a valid simple flag"
    )


# ---------------------------------------------------------------------------
# recursive matching construction


def flag_matching(d: Drawing) -> ProperMatching:
    """Build a proper matching of at least ``guaranteed_size(d.n)`` edges.

    Base (n <= 9): the edge joining the two leftmost vertices.  Otherwise
    recurse through :func:`find_structure`:

    * separating edge (i, j): union of the matchings of both sides; every
      cross-side pair gets witness "c" with separator (v_i, v_j), the
      below-side edge under the above-side edge;
    * good upper triplet (i, j, k): edge (v_i, v_j) plus the matching of
      the vertices under (v_j, v_k); (v_i, v_j) lies wholly left of that
      side, giving witness "a" or "b" per the pair's vertical order;
    * good lower triplet: mirrored.

    Deterministic for a fixed input.  Raises InvalidDrawing when the
    recursion meets geometry a valid flag cannot exhibit.
    """
    if not is_flag(d):
        raise NotAFlagError("matching construction needs a flag")
    if d.n < 2:
        raise ValueError(f"need at least 2 vertices, got {d.n}")
    edges, wits = _matching_rec(d)
    want = guaranteed_size(d.n)
    if len(edges) < want:
        raise InvalidDrawingError(
            f"recursion produced {len(edges)} edges, expected >= {want}; "
            "the input is not a valid simple flag"
        )
    order = tuple(sorted(edges, key=lambda p: cut_height(d.edge_between(*p))))
    return ProperMatching(order, wits)


def _matching_rec(d: Drawing) -> Tuple[List[Pair], Dict[Tuple[Pair, Pair], Witness]]:
    if d.n <= 9:
        e = d.edge_between(d.vertex_at(1).id, d.vertex_at(2).id)
        return [e.pair], {}

    ctx = _float_ctx(d)
    st = _find_structure_impl(d, ctx)

    if st.tag == SEPARATING_EDGE:
        i, j = st.positions
        ss = _side_split(d, i, j, ctx)
        sep = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id).pair
        lo_edges, lo_wits = _matching_rec(d.induced(ss.vminus))
        hi_edges, hi_wits = _matching_rec(d.induced(ss.vplus))
        wits = {**lo_wits, **hi_wits}
        # both sides sit right of the separating edge, under/over it by
        # construction, so every cross pair is separated by it
        for e in lo_edges:
            for f in hi_edges:
                wits[_pair_key(e, f)] = Witness(WIT_SEPARATOR, e, f, sep)
        return lo_edges + hi_edges, wits

    i, j, k = st.positions
    lead = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id)
    side = _side_split(d, j, k, ctx)
    ids = side.vminus if st.tag == GOOD_UPPER_TRIPLET else side.vplus
    if len(ids) < 2:
        raise InvalidDrawingError(
            f"good triplet at positions {st.positions} leaves only "
            f"{len(ids)} vertices to recurse on; the input is not a "
            "valid simple flag"
        )
    sub_edges, wits = _matching_rec(d.induced(ids))
    for p in sub_edges:
        rel = relation(lead, d.edge_between(*p))
        if rel is Relation.BELOW:
            wits[_pair_key(lead.pair, p)] = Witness(WIT_BELOW_LEFT, lead.pair, p)
        elif rel is Relation.ABOVE:
            wits[_pair_key(lead.pair, p)] = Witness(WIT_ABOVE_LEFT, p, lead.pair)
        else:
            raise InvalidDrawingError(
                f"edge {lead.pair} is not related to matched edge {p}; "
                "the input is not a valid simple flag"
            )
    return [lead.pair] + sub_edges, wits


# ---------------------------------------------------------------------------
# independent re-verification


def check_proper(d: Drawing, m: ProperMatching) -> Tuple[bool, List[str]]:
    """Re-derive the matching guarantees from geometry alone.

    Checks, for every unordered pair of matching edges: disjointness
    (no shared vertex, no crossing, no touching), vertical relatedness,
    and the existence of some witness among all edges of ``d`` (stored
    witnesses are ignored).  Returns (ok, violations); never raises on
    bad matchings.
    """
    out: List[str] = []
    curves: Dict[Pair, EdgeCurve] = {}
    for p in m.edges:
        try:
            curves[p] = d.edge_between(*p)
        except KeyError:
            out.append(f"membership: edge {p} is not in the drawing")
    pairs = [p for p in m.edges if p in curves]

    for a, b in combinations(pairs, 2):
        if set(a) & set(b):
            out.append(f"disjointness: edges {a} and {b} share a vertex")
            continue
        try:
            rel = relation(curves[a], curves[b])
        except DegenerateError as exc:
            out.append(f"disjointness: edges {a} and {b} touch ({exc})")
            continue
        if rel is Relation.CROSSING:
            out.append(f"disjointness: edges {a} and {b} cross")
        elif rel is Relation.NOT_RELATED:
            out.append(f"relatedness: edges {a} and {b} are not related")
        else:
            below, above = (a, b) if rel is Relation.BELOW else (b, a)
            if not _witness_exists(d, below, above):
                out.append(
                    f"witness: no left-of or separator witness for "
                    f"{below} below {above}"
                )
    return (not out), out


def _endpoint_xs(d: Drawing, p: Pair):
    return [d.vertex_by_id[v].x for v in p]


def _left_of(d: Drawing, a: Pair, b: Pair) -> bool:
    """Every endpoint of a strictly left of every endpoint of b."""
    return max(_endpoint_xs(d, a)) < min(_endpoint_xs(d, b))


def _witness_exists(d: Drawing, below: Pair, above: Pair) -> bool:
    if _left_of(d, below, above) or _left_of(d, above, below):
        return True
    lo = min(_endpoint_xs(d, below) + _endpoint_xs(d, above))
    for g in d.edges:
        if max(_endpoint_xs(d, g.pair)) >= lo:
            continue
        if _separates(d, g, below, above):
            return True
    return False


def _separates(d: Drawing, g: EdgeCurve, below: Pair, above: Pair) -> bool:
    try:
        for v in below:
            if point_relation(d.vertex_by_id[v].point, g) is not Relation.BELOW:
                return False
        for v in above:
            if point_relation(d.vertex_by_id[v].point, g) is not Relation.ABOVE:
                return False
    except DegenerateError:
        return False
    return True
