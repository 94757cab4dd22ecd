"""Disjoint-edge extraction for general monotone cylindrical drawings.

The driver partitions the cylinder into vertical slabs. Either enough slabs
fully contain an edge (one edge per slab is already a disjoint set), or some
slab holds exactly k vertices and no whole edge; then every edge among those
vertices leaves the slab, so after moving the cut to the slab's left wall
the induced subdrawing is a flag. Its proper matching e_1 below ... below
e_alpha stratifies the remaining vertices into layers, and cutting the layer
stack at an interior index s leaves everything strictly below e_{s-1} and
strictly above e_s, two vertex sets whose induced drawings cannot touch.
The two sides recurse independently.

Two modes share this skeleton. Practical mode picks k near sqrt(n) and
splits at the weighted median layer, which keeps the recursion balanced at
desk scale. Paper mode replays the asymptotic bookkeeping: k and every
threshold come from the guarantee function f(n) = c n^(1-eps), evaluated
with directed rounding so each comparison is certified, and instances at or
below the base size n0 are refused since the guarantee is vacuous there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    InvalidDrawingError,
    NoSplitError,
    NoValidCutError,
    ParamsRequiredError,
    UnrelatedVertexError,
    WrappingPairError,
)
from .flags import Pair, ProperMatching, check_proper, flag_matching
from .geometry import Drawing, crossing_count, cut_height, eval_at, is_flag, recut

DisjointEdgeSet = Tuple[Pair, ...]

MODE_PRACTICAL = "practical"
MODE_PAPER = "paper"


# ---------------------------------------------------------------------------
# slab partition


@dataclass(frozen=True)
class SlabPart:
    lo: Fraction
    hi: Fraction
    vertex_ids: Tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.vertex_ids)


@dataclass(frozen=True)
class SlabPartition:
    cuts: Tuple[Fraction, ...]  # ascending, cuts[0] == 0
    parts: Tuple[SlabPart, ...]


def slab_partition(d: Drawing, k: int) -> SlabPartition:
    """Cut the cylinder into ceil(n/k) vertical slabs of k vertices each
    (the last may be smaller), every cut chosen at an event-free x."""
    n = d.n
    if not 2 <= k <= n:
        raise ValueError(f"k={k} outside [2, {n}]")
    xs = [v.x for v in d.vertices]
    breakpoints = sorted(p[0] % 1 for e in d.edges for p in e.points[1:-1])
    m = -(-n // k)
    cuts: List[Fraction] = [Fraction(0)]
    for j in range(1, m):
        cuts.append(_free_cut(d, xs[j * k - 1], xs[j * k], breakpoints))
    parts: List[SlabPart] = []
    for j in range(m):
        lo = cuts[j]
        hi = cuts[j + 1] if j + 1 < m else Fraction(1)
        ids = tuple(v.id for v in d.vertices[j * k:(j + 1) * k])
        parts.append(SlabPart(lo, hi, ids))
    return SlabPartition(tuple(cuts), tuple(parts))


def _free_cut(d: Drawing, lo: Fraction, hi: Fraction, breakpoints) -> Fraction:
    """Event-free cut position strictly inside the vertex gap (lo, hi):
    midpoint of the widest breakpoint-free subinterval, shifted left while
    it coincides with a crossing."""
    import bisect

    inner = breakpoints[bisect.bisect_right(breakpoints, lo):
                        bisect.bisect_left(breakpoints, hi)]
    bounds = [lo] + inner + [hi]
    widest = max(range(len(bounds) - 1),
                 key=lambda i: (bounds[i + 1] - bounds[i], -i))
    glo, ghi = bounds[widest], bounds[widest + 1]
    a = (glo + ghi) / 2
    for _ in range(64):
        if _edge_heights_distinct(d, a):
            return a
        a = (glo + a) / 2
    raise NoValidCutError(f"no event-free cut inside ({lo}, {hi})")


def _edge_heights_distinct(d: Drawing, a: Fraction) -> bool:
    seen = set()
    for e in d.edges:
        y = eval_at(e, a)
        if y is not None:
            if y in seen:
                return False
            seen.add(y)
    return True


def contained_edge(d: Drawing, part: SlabPart) -> Optional[Pair]:
    """Lexicographically first edge drawn entirely inside the part's strip.

    Only direct edges qualify: a wrapping edge meets the cut line, and no
    strip straddles it."""
    for e in d.edges:  # sorted by pair
        if e.circular:
            continue
        if part.lo < e.points[0][0] and e.points[-1][0] < part.hi:
            return e.pair
    return None


# ---------------------------------------------------------------------------
# layers over an extracted flag


@dataclass(frozen=True)
class LayerDecomposition:
    vprime: frozenset
    matching: ProperMatching
    layers: Tuple[frozenset, ...]

    @property
    def alpha(self) -> int:
        return len(self.matching.edges)

    @property
    def total_n(self) -> int:
        return len(self.vprime) + sum(len(s) for s in self.layers)


def layers(d: Drawing, part, m: ProperMatching) -> LayerDecomposition:
    """Classify every vertex outside the flag against the matching edges.

    Requires the cut already moved to the part's left wall, so the flag's
    vertices are exactly the x-smallest ones and every matching edge covers
    every later vertex's vertical line. Heights of the matching edges on
    one line follow their cut-line order, so a binary search suffices."""
    vprime = frozenset(getattr(part, "vertex_ids", part))
    order = sorted(m.edges, key=lambda p: cut_height(d.edge_between(*p)))
    if tuple(order) != m.edges:
        m = ProperMatching(tuple(order), m.witnesses)
    curves = [d.edge_between(u, v) for u, v in m.edges]
    others = [v for v in d.vertices if v.id not in vprime]
    xmax = max((d.vertex_by_id[i].x for i in vprime), default=Fraction(0))
    if any(v.x <= xmax for v in others):
        raise InvalidDrawingError("flag vertices are not the x-smallest ones")

    buckets: List[set] = [set() for _ in range(len(curves) + 1)]
    for v in others:
        lo, hi = 0, len(curves)  # count of matching edges below v
        while lo < hi:
            mid = (lo + hi) // 2
            y = eval_at(curves[mid], v.x)
            if y is None or y == v.y:
                raise UnrelatedVertexError(
                    f"vertex {v.id} is not comparable with edge {curves[mid].pair}"
                )
            if y < v.y:
                lo = mid + 1
            else:
                hi = mid
        buckets[lo].add(v.id)
    return LayerDecomposition(vprime, m, tuple(frozenset(b) for b in buckets))


# ---------------------------------------------------------------------------
# split selection


@dataclass(frozen=True)
class SplitPlan:
    mode: str
    s: int
    upper: frozenset  # vertices strictly above e_s (layers > s)
    lower: frozenset  # vertices strictly below e_{s-1} (layers < s)
    bridge: Optional[Pair] = None  # with a bridge, layers s and s+1 are dropped


def _practical_target(n: int) -> int:
    return max(1, math.isqrt(max(n - 1, 0)) + 1)  # ceil(sqrt(n))


def _union_layers(l: LayerDecomposition, idx: Iterable[int]) -> frozenset:
    out: set = set()
    for i in idx:
        out |= l.layers[i - 1]
    return frozenset(out)


def choose_split(l: LayerDecomposition, mode: str = MODE_PRACTICAL,
                 params: Optional["PaperParams"] = None) -> SplitPlan:
    """Pick where to cut the layer stack.

    Bridge case first: if two consecutive layers are together small enough,
    drop them, keep the matching edge between them (it is disjoint from
    everything below the one and above the other), and recurse on both
    remainders. Otherwise pick an interior index: the weighted median in
    practical mode, the certified bucket walk in paper mode."""
    n = l.total_n
    alpha = l.alpha
    sizes = [len(s) for s in l.layers]
    if mode == MODE_PAPER:
        if params is None:
            raise ParamsRequiredError("paper mode needs explicit parameters")
        f_up = bound_value(params, n).upper
        bridge_ok = lambda tot: 10 * tot * f_up <= n
    elif mode == MODE_PRACTICAL:
        target = _practical_target(n)
        bridge_ok = lambda tot: tot * 10 * target <= n
    else:
        raise ValueError(f"unknown mode {mode!r}")

    for i in range(1, alpha + 1):
        if bridge_ok(sizes[i - 1] + sizes[i]):
            return SplitPlan(
                mode, i,
                upper=_union_layers(l, range(i + 2, alpha + 2)),
                lower=_union_layers(l, range(1, i)),
                bridge=l.matching.edges[i - 1],
            )

    if alpha < 2:
        raise NoSplitError("single matching edge and no small layer pair")

    if mode == MODE_PRACTICAL:
        half = Fraction(sum(sizes), 2)
        acc = 0
        s = alpha
        for i in range(1, alpha + 1):
            acc += sizes[i - 1]
            if acc >= half:
                s = i + 1
                break
        s = min(max(s, 2), alpha)
    else:
        s = _paper_split_index(l, params)
    return SplitPlan(
        mode, s,
        upper=_union_layers(l, range(s + 1, alpha + 2)),
        lower=_union_layers(l, range(1, s)),
    )


def _paper_split_index(l: LayerDecomposition, params: "PaperParams") -> int:
    """Walk the layers in size order, keep the mid-sized band, and find
    three consecutive band members whose sizes stay within a factor two;
    split at the middle one's original position."""
    n = l.total_n
    fb = bound_value(params, n)
    order = sorted(range(1, l.alpha + 2), key=lambda i: (len(l.layers[i - 1]), i))

    def in_band(i: int) -> bool:
        sz = len(l.layers[i - 1])
        # n/(20 f(n)) <= sz <= 1e5 f(n), certified via directed bounds
        return 20 * sz * fb.upper >= n and sz <= 10**5 * fb.lower

    band = [pos for pos, i in enumerate(order) if in_band(i)]
    for pos in band:
        if pos + 2 >= len(order):
            break
        if pos + 2 not in band:
            continue
        a, c = order[pos], order[pos + 2]
        if len(l.layers[c - 1]) <= 2 * len(l.layers[a - 1]):
            z = sorted((order[pos], order[pos + 1], order[pos + 2]))[1]
            return min(max(z, 2), l.alpha)
    raise NoSplitError("no admissible three-layer band found")


# ---------------------------------------------------------------------------
# greedy paths


def greedy_monotone(d: Drawing) -> DisjointEdgeSet:
    """Pair up x-consecutive vertices. The strips the pairs occupy are
    pairwise disjoint, so the result needs no geometric check, but every
    chosen edge must be direct."""
    out: List[Pair] = []
    for pos in range(1, d.n, 2):
        u, v = d.vertex_at(pos).id, d.vertex_at(pos + 1).id
        e = d.edge_between(u, v)
        if e.circular:
            raise WrappingPairError(f"edge {e.pair} wraps; greedy pairing unusable")
        out.append(e.pair)
    return tuple(out)


def _greedy_disjoint(d: Drawing) -> DisjointEdgeSet:
    """Lexicographic greedy with exact checks; the small-n workhorse."""
    chosen: List[Pair] = []
    curves = []
    for e in d.edges:
        if any(set(e.pair) & set(p) for p in chosen):
            continue
        if any(crossing_count(e, c) for c in curves):
            continue
        chosen.append(e.pair)
        curves.append(e)
    return tuple(chosen)


# ---------------------------------------------------------------------------
# asymptotic bookkeeping


def _int_root(x: int, q: int) -> int:
    """floor(x ** (1/q)) for nonnegative integers, exactly."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return 0
    r = 1 << -(-x.bit_length() // q)  # upper seed
    while True:
        nr = ((q - 1) * r + x // r ** (q - 1)) // q
        if nr >= r:
            break
        r = nr
    while r ** q > x:
        r -= 1
    return r


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


@dataclass(frozen=True)
class Bounded:
    """A real pinched between two rationals, with the pinch certified."""

    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def _root_bounds(x: Fraction, q: int, digits: int) -> Bounded:
    """Certified bounds on x**(1/q): scale by 10^digits, take integer
    roots with floor/ceil both ways."""
    s = 10 ** digits
    scaled = x * s ** q
    lo = _int_root(scaled.numerator // scaled.denominator, q)
    hi = _int_root(-(-scaled.numerator // scaled.denominator), q) + 1
    b = Bounded(Fraction(lo, s), Fraction(hi, s))
    assert b.lower ** q <= x <= b.upper ** q  # the certificate
    return b


@dataclass(frozen=True)
class PaperParams:
    """Parameters of the guarantee function f(n) = c n^(1-eps), c = n0^(eps-1).

    Valid parameters make two size conditions hold for every m >= n0:
    m^(eps^2) >= 10^6 and m^eps >= 10*ceil(log2 n0) + 1. Both reduce to
    integer-power comparisons at m = n0, so check() is exact."""

    epsilon: Fraction
    n0: int

    def __post_init__(self):
        if not 0 < self.epsilon < Fraction(1, 2):
            raise ValueError("epsilon must lie strictly between 0 and 1/2")
        if self.n0 < 2:
            raise ValueError("n0 must be at least 2")

    def check(self) -> bool:
        p, q = self.epsilon.numerator, self.epsilon.denominator
        size_cond = self.n0 ** (p * p) >= 10 ** (6 * q * q)
        log_cond = self.n0 ** p >= (10 * _ceil_log2(self.n0) + 1) ** q
        return size_cond and log_cond

    @classmethod
    def minimal(cls, epsilon: Fraction) -> "PaperParams":
        """Smallest n0 satisfying both size conditions, by bisection."""
        lo, hi = 2, 4
        while not cls(epsilon, hi).check():
            hi *= hi
        while lo < hi:
            mid = (lo + hi) // 2
            if cls(epsilon, mid).check():
                hi = mid
            else:
                lo = mid + 1
        return cls(epsilon, lo)

    def k_rule(self, n: int, f_upper: Fraction) -> int:
        return max(2, math.floor(Fraction(n) / (10 * f_upper)))


def bound_value(params: PaperParams, n: int, digits: int = 12) -> Bounded:
    """f(n) = (n/n0)^(1-eps) with certified directed rounding."""
    if n < 1:
        raise ValueError("n must be positive")
    p, q = params.epsilon.numerator, params.epsilon.denominator
    x = Fraction(n ** (q - p), params.n0 ** (q - p))
    return _root_bounds(x, q, digits)


def slope_value(params: PaperParams, y: Fraction, digits: int = 12) -> Bounded:
    """f'(y) = (1-eps) * (n0^(1-eps) * y^eps)^(-1), certified."""
    if y <= 0:
        raise ValueError("y must be positive")
    p, q = params.epsilon.numerator, params.epsilon.denominator
    base = Fraction(params.n0 ** (q - p)) * y ** p
    root = _root_bounds(base, q, digits)
    coeff = 1 - params.epsilon
    return Bounded(coeff / root.upper, coeff / root.lower)


def _widen(fn: Callable[[int], bool], max_digits: int = 60) -> bool:
    digits = 12
    while digits <= max_digits:
        r = fn(digits)
        if r is not None:
            return r
        digits *= 2
    return False


def check_concavity_step(params: PaperParams, m: int, x: int) -> bool:
    """f(m-x) >= f(m) - f'(m-x) * x for 0 <= x < m, m > 2."""
    if not (m > 2 and 0 <= x < m):
        raise ValueError("need m > 2 and 0 <= x < m")
    if x == 0:
        return True

    def attempt(digits: int):
        lhs = bound_value(params, m - x, digits).lower
        rhs = (bound_value(params, m, digits).upper
               - slope_value(params, Fraction(m - x), digits).lower * x)
        if lhs >= rhs:
            return True
        return None  # inconclusive at this precision

    return _widen(attempt)


def check_split_sum(params: PaperParams, a: int, b: int, x: int) -> bool:
    """f(a) + f(b) >= f(a+b-x) + f(x) for 0 <= x <= min(a, b), x < (a+b)/2."""
    m = a + b
    if not (a >= x and b >= x and 0 <= x and 2 * x < m):
        raise ValueError("need a, b >= x and x < (a+b)/2")
    if x in (a, b):
        return True  # both sides identical
    if x == 0:
        def attempt(digits: int):
            lhs = bound_value(params, a, digits).lower + bound_value(params, b, digits).lower
            if lhs >= bound_value(params, m, digits).upper:
                return True
            return None
        return _widen(attempt)

    def attempt(digits: int):
        lhs = bound_value(params, a, digits).lower + bound_value(params, b, digits).lower
        rhs = bound_value(params, m - x, digits).upper + bound_value(params, x, digits).upper
        if lhs >= rhs:
            return True
        return None

    return _widen(attempt)


def check_bucket_chain(params: PaperParams, n: int) -> bool:
    """The mid-size band is large: n/(1000 f(n)) >= 10*ceil(log2 n) + 1,
    an exact integer-power comparison since 1/f(n) = (n0/n)^(1-eps)."""
    if n <= params.n0:
        raise ValueError("chain is asserted only above the base size")
    p, q = params.epsilon.numerator, params.epsilon.denominator
    rhs = 10 * _ceil_log2(n) + 1
    # n/(1000 f(n)) = n^eps * n0^(1-eps) / 1000 >= rhs
    return n ** p * params.n0 ** (q - p) >= (1000 * rhs) ** q


def theorem1_bound(n: int, delta: int, flag_bound: Callable[[int], int]) -> int:
    """Composition arithmetic max(ceil(n/delta), flag_bound(delta))."""
    if not 0 < delta < n:
        raise ValueError("need 0 < delta < n")
    return max(-(-n // delta), flag_bound(delta))


# ---------------------------------------------------------------------------
# the solver


@dataclass(frozen=True)
class SolveStep:
    """One recursion level that went through a flag extraction."""

    drawing: Drawing  # in the recut frame the layers were computed in
    decomposition: LayerDecomposition
    plan: Optional[SplitPlan]


def solve(d: Drawing, mode: str = MODE_PRACTICAL,
          params: Optional[PaperParams] = None, k: Optional[int] = None,
          verify: bool = False,
          trace: Optional[List[SolveStep]] = None) -> DisjointEdgeSet:
    """Pairwise disjoint edge set of a validated complete drawing.

    k overrides the slab width at every recursion level (clamped to the
    current vertex count). The output is re-checked for pairwise
    disjointness before returning regardless of mode; a failure there
    means the input violated the validator's contract."""
    if not d.complete:
        raise InvalidDrawingError("solver needs a complete drawing")
    if mode == MODE_PAPER:
        if params is None:
            raise ParamsRequiredError("paper mode needs explicit parameters")
        if d.n <= params.n0:
            raise ValueError(
                f"paper mode is vacuous for n={d.n} <= n0={params.n0}: "
                "the guarantee f(n) does not exceed one edge there"
            )
    elif mode != MODE_PRACTICAL:
        raise ValueError(f"unknown mode {mode!r}")
    if k is not None and k < 2:
        raise ValueError("k must be at least 2")

    out = _solve_rec(d, mode, params, k, verify, trace)
    out = tuple(sorted(set(out)))
    bad = _disjointness_failures(d, out)
    if bad:
        raise InvalidDrawingError("solver produced intersecting edges: " + "; ".join(bad))
    return out


def _disjointness_failures(d: Drawing, pairs: Sequence[Pair]) -> List[str]:
    msgs = []
    for i, a in enumerate(pairs):
        for b in pairs[i + 1:]:
            if set(a) & set(b):
                msgs.append(f"{a} and {b} share a vertex")
            elif crossing_count(d.edge_between(*a), d.edge_between(*b)):
                msgs.append(f"{a} and {b} cross")
    return msgs


def _practical_k(n: int) -> int:
    return min(n, max(10, _practical_target(n)))


def _solve_rec(d: Drawing, mode: str, params: Optional[PaperParams],
               k_over: Optional[int], verify: bool,
               trace: Optional[List[SolveStep]]) -> DisjointEdgeSet:
    n = d.n
    if n < 2:
        return ()
    try:
        return greedy_monotone(d)
    except WrappingPairError:
        pass

    if mode == MODE_PAPER:
        f_up = bound_value(params, n).upper
        k = params.k_rule(n, f_up)
        threshold = f_up
    else:
        k = _practical_k(n)
        threshold = _practical_target(n)
    if k_over is not None:
        k = min(n, k_over)
    if k >= n or n <= 12:
        return _greedy_disjoint(d)

    partition = slab_partition(d, k)
    collected: List[Pair] = []
    empty_part: Optional[SlabPart] = None
    for part in partition.parts:
        e = contained_edge(d, part)
        if e is not None:
            collected.append(e)
        elif empty_part is None and part.count == k:
            empty_part = part
    if len(collected) >= threshold or empty_part is None:
        if collected:
            return tuple(collected)
        return _greedy_disjoint(d)

    d2 = d if empty_part.lo == 0 else recut(d, empty_part.lo)
    sub = d2.induced(empty_part.vertex_ids)
    if not is_flag(sub):
        raise InvalidDrawingError("edge-free slab did not induce a flag")
    m = flag_matching(sub)
    if verify:
        ok, msgs = check_proper(sub, m)
        if not ok:
            raise InvalidDrawingError(
                "matching properness failed: " + "; ".join(msgs)
            )
    decomp = layers(d2, empty_part, m)

    try:
        plan = choose_split(decomp, mode, params)
    except NoSplitError:
        plan = None
    if trace is not None:
        trace.append(SolveStep(d2, decomp, plan))
    if verify:
        problems = verify_layer_claims(d2, decomp)
        if problems:
            raise InvalidDrawingError("layer claims failed: " + "; ".join(problems))

    if plan is None:
        # single matching edge: recurse on the bigger side of it and keep
        # the edge itself only if an exact check confirms it fits
        big = max(decomp.layers, key=len)
        rest = _solve_in(d2, big, mode, params, k_over, verify, trace)
        e1 = decomp.matching.edges[0]
        return _verified_add(d2, e1, rest)

    upper = _solve_in(d2, plan.upper, mode, params, k_over, verify, trace)
    lower = _solve_in(d2, plan.lower, mode, params, k_over, verify, trace)
    out = upper + lower
    if plan.bridge is not None:
        out = _verified_add(d2, plan.bridge, out)
    return out


def _solve_in(d: Drawing, ids: frozenset, mode, params, k_over, verify,
              trace) -> DisjointEdgeSet:
    if len(ids) < 2:
        return ()
    return _solve_rec(d.induced(ids), mode, params, k_over, verify, trace)


def _verified_add(d: Drawing, extra: Pair, rest: DisjointEdgeSet) -> DisjointEdgeSet:
    ec = d.edge_between(*extra)
    for p in rest:
        if set(extra) & set(p) or crossing_count(ec, d.edge_between(*p)):
            return rest
    return rest + (extra,)


def verify_layer_claims(d: Drawing, l: LayerDecomposition) -> List[str]:
    """Re-derive the split guarantees geometrically, for every interior
    index s, not only the chosen one: edges below the stack cut never meet
    edges above it, edges above are disjoint from e_{s-1}, and edges below
    are disjoint from e_s."""
    problems: List[str] = []
    alpha = l.alpha
    curves = {p: d.edge_between(*p) for p in l.matching.edges}

    def edge_curves(ids: frozenset):
        sub = d.induced(ids)
        return list(sub.edges)

    for s in range(2, alpha + 1):
        upper = _union_layers(l, range(s + 1, alpha + 2))
        lower = _union_layers(l, range(1, s))
        ues = edge_curves(upper)
        wes = edge_curves(lower)
        for eu in ues:
            for ew in wes:
                if crossing_count(eu, ew):
                    problems.append(f"s={s}: {eu.pair} meets {ew.pair}")
        e_lo = curves[l.matching.edges[s - 2]]
        e_hi = curves[l.matching.edges[s - 1]]
        for eu in ues:
            if set(eu.pair) & set(e_lo.pair) or crossing_count(eu, e_lo):
                problems.append(f"s={s}: upper edge {eu.pair} meets {e_lo.pair}")
        for ew in wes:
            if set(ew.pair) & set(e_hi.pair) or crossing_count(ew, e_hi):
                problems.append(f"s={s}: lower edge {ew.pair} meets {e_hi.pair}")
    return problems
