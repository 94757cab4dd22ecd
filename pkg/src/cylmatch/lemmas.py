"""Replayable property suites over generated corpora.

Every structural promise made elsewhere in the package (crossing symmetry,
side-split separation, layer-split disjointness, generator determinism, and
so on) is re-derived here from raw geometry, instance by instance.  The
harness reports pass/fail/skip counts per suite; a failing instance is
shrunk by greedy vertex deletion and emitted in MCD1 form, so a bug
reproduces from one small committed file.

Corpus items are described declaratively (generator configs, archetype
names, file paths) so the harness can fan out across processes; report
aggregation is a plain merge, associative and order-independent.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import generate, mcdio, oracle, solver, validate
from .errors import (
    CylmatchError,
    EventAtCutError,
    InvalidDrawingError,
    WrappingPairError,
)
from .flags import (
    GOOD_UPPER_TRIPLET,
    SEPARATING_EDGE,
    check_proper,
    find_structure,
    flag_matching,
    guaranteed_size,
    side_sets,
)
from .generate import GenConfig
from .geometry import (
    Drawing,
    Relation,
    _arc_intersect,
    crossing_count,
    crossings,
    is_flag,
    point_relation,
    recut,
    relation,
    split_circular,
)

BELOW = Relation.BELOW
ABOVE = Relation.ABOVE

CorpusSpec = Tuple[str, object]


@dataclass(frozen=True)
class CorpusItem:
    name: str
    drawing: Drawing
    regen: Optional[Callable[[], Drawing]] = None


@dataclass(frozen=True)
class Suite:
    name: str
    applies: Callable[[CorpusItem], bool]
    check: Callable[[CorpusItem], List[str]]


@dataclass(frozen=True)
class SuiteOutcome:
    suite: str
    instance: str
    problems: Tuple[str, ...] = ()
    skipped: bool = False
    counterexample: Optional[str] = None

    @property
    def failed(self) -> bool:
        return bool(self.problems)


@dataclass(frozen=True)
class LemmaReport:
    outcomes: Tuple[SuiteOutcome, ...]
    exhibits: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return not any(o.failed for o in self.outcomes) and all(
            self.exhibits.values()
        )

    def counts(self) -> Dict[str, Tuple[int, int, int]]:
        """Per suite: (passed, failed, skipped), suites in registry order."""
        out: Dict[str, Tuple[int, int, int]] = {}
        for o in self.outcomes:
            p, f, s = out.get(o.suite, (0, 0, 0))
            if o.skipped:
                s += 1
            elif o.failed:
                f += 1
            else:
                p += 1
            out[o.suite] = (p, f, s)
        return out

    def summary(self) -> str:
        lines = [f"{'suite':<26} {'pass':>5} {'fail':>5} {'skip':>5}"]
        for name, (p, f, s) in sorted(self.counts().items()):
            lines.append(f"{name:<26} {p:>5} {f:>5} {s:>5}")
        for name, found in sorted(self.exhibits.items()):
            lines.append(f"exhibit {name}: {'found' if found else 'MISSING'}")
        fails = sorted(
            (o for o in self.outcomes if o.failed),
            key=lambda o: (o.instance, o.suite),
        )
        for o in fails:
            lines.append(f"FAIL {o.instance} / {o.suite}:")
            for p in o.problems[:8]:
                lines.append(f"  - {p}")
            if len(o.problems) > 8:
                lines.append(f"  ... {len(o.problems) - 8} more")
            if o.counterexample:
                lines.append("  minimized counterexample:")
                for ln in o.counterexample.strip().splitlines():
                    lines.append(f"    {ln}")
        lines.append("RESULT: " + ("all suites pass" if self.ok else "FAILURES"))
        return "\n".join(lines)


def merge_reports(parts: List[LemmaReport]) -> LemmaReport:
    outcomes: List[SuiteOutcome] = []
    exhibits: Dict[str, bool] = {}
    for part in parts:
        outcomes.extend(part.outcomes)
        for k, v in part.exhibits.items():
            exhibits[k] = exhibits.get(k, False) or v
    return LemmaReport(tuple(outcomes), exhibits)


# ---------------------------------------------------------------------------
# corpus construction


def build_item(spec: CorpusSpec) -> CorpusItem:
    kind, arg = spec
    if kind == "archetype":
        for name, d in generate.gen_archetypes():
            if name == arg:
                return CorpusItem(f"archetype-{name}", d)
        raise ValueError(f"unknown archetype {arg!r}")
    if kind == "file":
        path = Path(arg)
        return CorpusItem(f"file-{path.name}", mcdio.parse_mcd(path.read_text()))
    fns = {
        "flag": generate.gen_flag,
        "mixed": generate.gen_mixed,
        "planefree": generate.gen_planefree,
    }
    if kind not in fns:
        raise ValueError(f"unknown corpus item kind {kind!r}")
    cfg = arg
    return CorpusItem(
        f"{kind}-n{cfg.n}-s{cfg.seed}", fns[kind](cfg), regen=lambda: fns[kind](cfg)
    )


def default_corpus() -> List[CorpusSpec]:
    """Small mix of archetypes, flags, mixed and wrap-free drawings.

    Sizes are kept modest so the exhaustive suites (all four-tuples, all
    edge triples) stay well under a minute in total.
    """
    specs: List[CorpusSpec] = [
        ("archetype", name) for name, _ in generate.gen_archetypes()
    ]
    for n in (10, 11, 12, 13, 14):
        for seed in (1, 2):
            specs.append(("flag", GenConfig(n=n, seed=seed)))
    specs.append(("flag", GenConfig(n=20, seed=1)))
    specs.append(("flag", GenConfig(n=40, seed=1)))
    for n, seed in ((12, 1), (16, 2), (20, 3), (24, 1), (30, 2)):
        specs.append(("mixed", GenConfig(n=n, seed=seed)))
    # wrap-heavy instances feed the circular-pair case analyses
    specs.append(("mixed", GenConfig(n=16, seed=5, wrap_prob=Fraction(17, 20))))
    specs.append(("mixed", GenConfig(n=20, seed=7, wrap_prob=Fraction(4, 5))))
    specs.append(("planefree", GenConfig(n=8, seed=1)))
    specs.append(("planefree", GenConfig(n=13, seed=2)))
    return specs


def corpus_from_counts(
    flags: int = 0,
    mixed: int = 0,
    planefree: int = 0,
    seed0: int = 1,
    nmin: int = 10,
    nmax: int = 40,
) -> List[CorpusSpec]:
    """Spread ``count`` instances of each kind over [nmin, nmax]."""
    if nmin < 2 or nmax < nmin:
        raise ValueError(f"bad size range [{nmin}, {nmax}]")
    specs: List[CorpusSpec] = []
    for kind, count, lo in (
        ("flag", flags, max(nmin, 10)),
        ("mixed", mixed, max(nmin, 4)),
        ("planefree", planefree, max(nmin, 4)),
    ):
        sizes = list(range(lo, nmax + 1)) or [lo]
        for i in range(count):
            n = sizes[i % len(sizes)]
            specs.append((kind, GenConfig(n=n, seed=seed0 + i)))
    return specs


# ---------------------------------------------------------------------------
# small shared helpers


def _pair_problems(d: Drawing, pairs, tag: str) -> List[str]:
    """Exact pairwise disjointness re-check used on every produced set."""
    out = []
    for bad in validate.pairwise_disjoint(d, pairs):
        out.append(f"{tag}: {bad[0]} and {bad[1]}: {bad[2]}")
    return out


def _arcs_cover(inner, outer) -> bool:
    # open-arc intersection preserves length, so full coverage is a
    # length identity
    segs = _arc_intersect(inner, outer)
    return sum(l for _, l in segs) == inner[1]


def _common_line(a, b, c) -> bool:
    for seg in _arc_intersect(a.arc, b.arc):
        if _arc_intersect(seg, c.arc):
            return True
    return False


def _cyl_points(pts) -> List[tuple]:
    return sorted(((x % 1, y) for x, y in pts))


# ---------------------------------------------------------------------------
# suite bodies (each returns a list of human-readable problems)


def _check_validator(item: CorpusItem) -> List[str]:
    rep = validate.validate(item.drawing)
    return [str(v) for v in rep.violations]


def _check_crossing_symmetry(item: CorpusItem) -> List[str]:
    d = item.drawing
    problems = []
    for e, f in combinations(d.edges, 2):
        if _cyl_points(crossings(e, f)) != _cyl_points(crossings(f, e)):
            problems.append(f"{e.pair} vs {f.pair}: crossing sets differ by order")
    return problems


def _check_single_crossing(item: CorpusItem) -> List[str]:
    d = item.drawing
    problems = []
    for e, f in combinations(d.edges, 2):
        c = crossing_count(e, f)
        if c > 1:
            problems.append(f"{e.pair} and {f.pair} cross {c} times")
        if c and set(e.pair) & set(f.pair):
            problems.append(f"adjacent edges {e.pair} and {f.pair} cross")
    return problems


def _check_trichotomy(item: CorpusItem) -> List[str]:
    d = item.drawing
    problems = []
    for e, f in combinations(d.edges, 2):
        r, rr = relation(e, f), relation(f, e)
        crossed = crossing_count(e, f) > 0
        if (r is Relation.CROSSING) != crossed:
            problems.append(f"{e.pair} vs {f.pair}: {r.name} but crossed={crossed}")
        flip = {BELOW: ABOVE, ABOVE: BELOW}.get(r, r)
        if rr is not flip:
            problems.append(f"{e.pair} vs {f.pair}: {r.name} reversed to {rr.name}")
    return problems


def _check_covered_parity(item: CorpusItem) -> List[str]:
    """A curve running strictly on one side of an edge, over x it covers,
    meets that edge an even number of times; zero meetings pin the order."""
    d = item.drawing
    problems = []
    for e in d.edges:
        for f in d.edges:
            if e is f or set(e.pair) & set(f.pair):
                continue
            va, vb = (d.vertex_by_id[i] for i in f.pair)
            sa, sb = point_relation(va.point, e), point_relation(vb.point, e)
            if sa is not sb or sa not in (BELOW, ABOVE):
                continue
            if not _arcs_cover(f.arc, e.arc):
                continue
            c = crossing_count(e, f)
            if c % 2:
                problems.append(f"{f.pair} on one side of {e.pair}, {c} crossings")
            elif c == 0 and relation(f, e) is not sa:
                problems.append(
                    f"{f.pair} endpoints {sa.name} {e.pair} without crossings, "
                    f"yet relation says {relation(f, e).name}"
                )
    return problems


def _check_wrap_sides(item: CorpusItem) -> List[str]:
    """Disjoint wrapping edges are either ordered or split each other's
    endpoints both ways."""
    d = item.drawing
    problems = []
    circ = [e for e in d.edges if e.circular]
    for e, f in combinations(circ, 2):
        if set(e.pair) & set(f.pair) or crossings(e, f):
            continue
        if relation(e, f) in (BELOW, ABOVE):
            continue
        sides_ef = {
            point_relation(d.vertex_by_id[i].point, f) for i in e.pair
        }
        sides_fe = {
            point_relation(d.vertex_by_id[i].point, e) for i in f.pair
        }
        if sides_ef != {BELOW, ABOVE} or sides_fe != {BELOW, ABOVE}:
            problems.append(
                f"{e.pair} and {f.pair} disjoint, unordered, yet endpoints "
                f"do not straddle"
            )
    return problems


def _check_shared_vertex_order(item: CorpusItem) -> List[str]:
    """On an all-wrapping drawing edges with a common endpoint are ordered,
    and the third vertex sits on the same side as the edge through it."""
    d = item.drawing
    problems = []
    ids = [v.id for v in d.vertices]
    for a in ids:
        for b, c in combinations([i for i in ids if i != a], 2):
            eab = d.edge_between(a, b)
            eac = d.edge_between(a, c)
            r = relation(eac, eab)
            if r not in (BELOW, ABOVE):
                problems.append(f"edges {eab.pair}, {eac.pair} share {a}: {r.name}")
                continue
            pc = point_relation(d.vertex_by_id[c].point, eab)
            if pc in (BELOW, ABOVE) and pc is not r:
                problems.append(
                    f"vertex {c} is {pc.name} edge {eab.pair} but edge "
                    f"{eac.pair} is {r.name}"
                )
    return problems


def _check_transitivity(item: CorpusItem) -> List[str]:
    """Vertical order chains only along a shared vertical line; a cyclic
    triple with a common line is a contradiction."""
    d = item.drawing
    es = list(d.edges)
    rel: Dict[Tuple[int, int], Relation] = {}
    for i, j in combinations(range(len(es)), 2):
        rel[(i, j)] = relation(es[i], es[j])

    def below(i: int, j: int) -> Optional[bool]:
        r = rel[(i, j)] if i < j else rel[(j, i)]
        if i > j:
            r = {BELOW: ABOVE, ABOVE: BELOW}.get(r, r)
        return {BELOW: True, ABOVE: False}.get(r)

    problems = []
    for i, j, k in combinations(range(len(es)), 3):
        ij, jk, ki = below(i, j), below(j, k), below(k, i)
        if None in (ij, jk, ki):
            continue
        if ij == jk == ki and _common_line(es[i], es[j], es[k]):
            problems.append(
                f"cyclic order {es[i].pair} -> {es[j].pair} -> {es[k].pair} "
                f"on a common vertical line"
            )
    return problems


def _has_order_cycle(d: Drawing) -> bool:
    """A cyclic ordered triple with no common vertical line; the reason the
    vertical order is not transitive in general."""
    if len(d.edges) > 12:
        return False
    for a, b, c in combinations(d.edges, 3):
        rs = (relation(a, b), relation(b, c), relation(c, a))
        if rs[0] in (BELOW, ABOVE) and rs[0] is rs[1] and rs[1] is rs[2]:
            if not _common_line(a, b, c):
                return True
    return False


def _check_recut(item: CorpusItem) -> List[str]:
    """Moving the angular origin must not change crossing counts, pair
    adjacency, or validity."""
    d = item.drawing
    xs = [v.x for v in d.vertices]
    moved = None
    for a, b in zip(xs, xs[1:]):
        try:
            moved = recut(d, (a + b) / 2)
            break
        except EventAtCutError:
            continue
    if moved is None:
        return []  # no event-free spot among the sampled gaps
    problems = []
    if not validate.validate(moved).ok:
        problems.append("recut drawing fails validation")

    def counts(dd: Drawing):
        # an edge's endpoint order depends on the frame, so key by id set
        out = {}
        for e, f in combinations(dd.edges, 2):
            key = tuple(sorted((tuple(sorted(e.pair)), tuple(sorted(f.pair)))))
            out[key] = crossing_count(e, f)
        return out

    before, after = counts(d), counts(moved)
    if before != after:
        diff = [k for k in before if before[k] != after.get(k)]
        problems.append(f"crossing counts changed for {diff[:4]}")
    return problems


def _check_four_tuple_cases(item: CorpusItem) -> List[str]:
    """Exhaustive case analysis for edge pairs on disjoint rank intervals
    of an all-wrapping drawing: the crossing test, the piece-level crossing
    test, and the endpoint side pattern must agree; disjointness is exactly
    'both earlier endpoints on the far side'."""
    d = item.drawing
    problems = []
    splits = {e.pair: split_circular(e) for e in d.edges}
    vat = [None] + [d.vertex_at(i) for i in range(1, d.n + 1)]
    for i1, i2, i3, i4 in combinations(range(1, d.n + 1), 4):
        e1 = d.edge_between(vat[i1].id, vat[i2].id)
        e2 = d.edge_between(vat[i3].id, vat[i4].id)
        s3 = point_relation(vat[i3].point, e1)
        s4 = point_relation(vat[i4].point, e1)
        if s3 is not s4 or s3 not in (BELOW, ABOVE):
            continue
        want = s3
        opp = ABOVE if want is BELOW else BELOW
        neg1, pos1 = splits[e1.pair]
        neg2, _pos2 = splits[e2.pair]
        c1 = crossing_count(e1, e2) > 0
        c2 = crossing_count(pos1, neg2) > 0
        p1 = point_relation(vat[i1].point, e2)
        p2 = point_relation(vat[i2].point, e2)
        c3 = p2 is want and p1 is opp and relation(neg2, neg1) is want
        tag = f"ranks {(i1, i2, i3, i4)} ({want.name} case)"
        if not (c1 == c2 == c3):
            problems.append(f"{tag}: cross={c1} piece-cross={c2} pattern={c3}")
        if (not c1) != (p1 is opp and p2 is opp):
            problems.append(f"{tag}: disjoint={not c1} but sides {p1.name},{p2.name}")
    return problems


def _check_fan_order(item: CorpusItem) -> List[str]:
    """Edges from the leftmost vertex to one side of the base edge are
    totally ordered by their far endpoint's rank."""
    d = item.drawing
    problems = []
    ss = side_sets(d, 1, 2)
    v1 = d.vertex_at(1).id
    pos = d.pos_by_id
    for group, want in ((ss.vplus, BELOW), (ss.vminus, ABOVE)):
        ranked = sorted(group, key=lambda i: pos[i])
        for a, b in combinations(ranked, 2):
            r = relation(d.edge_between(v1, a), d.edge_between(v1, b))
            if r is not want:
                problems.append(
                    f"fan edges ({v1},{a}) vs ({v1},{b}): {r.name}, "
                    f"expected {want.name}"
                )
    return problems


def _check_side_split_separation(item: CorpusItem) -> List[str]:
    """Every splitting pair (both sides populated twice over) fully
    separates: each upper-side edge is strictly above each lower-side
    edge, hence crossing-free."""
    d = item.drawing
    problems = []
    for i, j in combinations(range(1, d.n + 1), 2):
        ss = side_sets(d, i, j)
        if not ss.separating:
            continue
        for pa in combinations(sorted(ss.vplus), 2):
            ea = d.edge_between(*pa)
            for pb in combinations(sorted(ss.vminus), 2):
                r = relation(ea, d.edge_between(*pb))
                if r is not ABOVE:
                    problems.append(
                        f"split ({i},{j}): {pa} over {pb} gives {r.name}"
                    )
    return problems


def _replay_matching(d: Drawing) -> List[str]:
    """Walk the matching recursion re-deriving the separation guarantee
    behind every anchor it selects, level by level."""
    if d.n <= 9:
        return []
    try:
        st = find_structure(d)
    except InvalidDrawingError as ex:
        return [f"n={d.n}: no recursion anchor: {ex}"]
    problems: List[str] = []
    if st.tag == SEPARATING_EDGE:
        i, j = st.positions
        ss = side_sets(d, i, j)
        if not ss.separating:
            problems.append(f"anchor ({i},{j}) claims separation but is not")
        for pa in combinations(sorted(ss.vplus), 2):
            ea = d.edge_between(*pa)
            for pb in combinations(sorted(ss.vminus), 2):
                r = relation(ea, d.edge_between(*pb))
                if r is not ABOVE:
                    problems.append(f"anchor ({i},{j}): {pa} vs {pb}: {r.name}")
        if len(ss.vplus) >= 2:
            problems += _replay_matching(d.induced(ss.vplus))
        if len(ss.vminus) >= 2:
            problems += _replay_matching(d.induced(ss.vminus))
    else:
        i, j, k = st.positions
        lead = d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id)
        ss = side_sets(d, j, k)
        upper = st.tag == GOOD_UPPER_TRIPLET
        ids = ss.vminus if upper else ss.vplus
        far = ss.vplus if upper else ss.vminus
        if len(far) > 1:
            problems.append(f"triplet {st.positions}: far side has {len(far)}")
        for p in combinations(sorted(ids), 2):
            r = relation(lead, d.edge_between(*p))
            if r not in (BELOW, ABOVE):
                problems.append(f"triplet {st.positions}: lead vs {p}: {r.name}")
        if len(ids) >= 2:
            problems += _replay_matching(d.induced(ids))
    return problems


def _check_extraction_replay(item: CorpusItem) -> List[str]:
    return _replay_matching(item.drawing)


def _check_structure_exists(item: CorpusItem) -> List[str]:
    d = item.drawing
    try:
        st = find_structure(d)
    except InvalidDrawingError as ex:
        return [f"no recursion anchor found: {ex}"]
    if max(st.positions) > 6:
        return [f"anchor {st.positions} outside the six leftmost vertices"]
    # re-derive the anchor's defining property from scratch
    if st.tag == SEPARATING_EDGE:
        if not side_sets(d, *st.positions).separating:
            return [f"anchor {st.positions} is not separating"]
        return []
    i, j, k = st.positions
    r = relation(
        d.edge_between(d.vertex_at(j).id, d.vertex_at(k).id),
        d.edge_between(d.vertex_at(i).id, d.vertex_at(j).id),
    )
    ss = side_sets(d, j, k)
    if st.tag == GOOD_UPPER_TRIPLET:
        if r is not BELOW or len(ss.vplus) > 1:
            return [f"upper triplet {st.positions}: r={r.name}, |up|={len(ss.vplus)}"]
    else:
        if r is not ABOVE or len(ss.vminus) > 1:
            return [f"lower triplet {st.positions}: r={r.name}, |down|={len(ss.vminus)}"]
    return []


def _check_matching_proper(item: CorpusItem) -> List[str]:
    d = item.drawing
    problems = []
    m = flag_matching(d)
    if flag_matching(d) != m:
        problems.append("matching changed between two identical runs")
    want = guaranteed_size(d.n)
    if len(m.edges) < want:
        problems.append(f"matching size {len(m.edges)} < promised {want}")
    problems += _pair_problems(d, m.edges, "matching")
    ok, msgs = check_proper(d, m)
    if not ok:
        problems += [f"properness: {msg}" for msg in msgs]
    return problems


def _check_induced_closure(item: CorpusItem) -> List[str]:
    d = item.drawing
    ids = [v.id for v in d.vertices]
    problems = []
    for tag, keep in (
        ("drop-first", ids[1:]),
        ("drop-last", ids[:-1]),
        ("every-other", ids[::2]),
        ("ends", ids[:3] + ids[-3:]),
    ):
        if len(keep) < 2:
            continue
        sub = d.induced(keep)
        rep = validate.validate(sub)
        if not rep.ok:
            problems.append(f"{tag}: induced drawing invalid: {rep.violations[0]}")
        if not is_flag(sub):
            problems.append(f"{tag}: induced drawing lost the all-wrapping form")
    return problems


def _check_layer_split(item: CorpusItem) -> List[str]:
    """Drive the practical solver with a trace and re-verify, for every
    recursion level and every interior stack index, that the split really
    separates; the extracted all-wrapping cores get their recursion
    anchors replayed too."""
    d = item.drawing
    trace: List[solver.SolveStep] = []
    out = solver.solve(d, solver.MODE_PRACTICAL, trace=trace)
    problems = _pair_problems(d, out, "solution")
    for step in trace:
        problems += solver.verify_layer_claims(step.drawing, step.decomposition)
        core = step.drawing.induced(step.decomposition.vprime)
        problems += _replay_matching(core)
    return problems


def _check_wrap_cross_patterns(item: CorpusItem) -> List[str]:
    """Wrapping edges over disjoint rank intervals, later pair on one side
    of the earlier: disjoint forces the order, crossing forces exactly one
    of two endpoint patterns with the matching piece order."""
    d = item.drawing
    problems = []
    circ = [e for e in d.edges if e.circular]
    pos = d.pos_by_id
    vb = d.vertex_by_id
    for e in circ:
        for f in circ:
            if e is f or set(e.pair) & set(f.pair):
                continue
            r1, r2 = sorted(pos[i] for i in e.pair)
            r3, r4 = sorted(pos[i] for i in f.pair)
            if not (r1 < r2 < r3 < r4):
                continue
            s3 = point_relation(vb[f.pair[0]].point, e)
            s4 = point_relation(vb[f.pair[1]].point, e)
            if s3 is not s4 or s3 not in (BELOW, ABOVE):
                continue
            want, opp = s3, (ABOVE if s3 is BELOW else BELOW)
            p1 = point_relation(vb[e.pair[0]].point, f)
            p2 = point_relation(vb[e.pair[1]].point, f)
            fneg, _ = split_circular(f)
            eneg, epos = split_circular(e)
            tag = f"{e.pair} over {f.pair} ({want.name} case)"
            if not crossings(e, f):
                if relation(f, e) is not want or p1 is not opp or p2 is not opp:
                    problems.append(f"{tag}: disjoint but order/pattern broken")
                continue
            pat1 = p1 is opp and p2 is want and relation(fneg, eneg) is want
            pat2 = p1 is want and p2 is opp and relation(fneg, epos) is want
            if pat1 == pat2:
                problems.append(
                    f"{tag}: crossing fits {'both' if pat1 else 'neither'} pattern"
                )
    return problems


def _check_slab_pick(item: CorpusItem) -> List[str]:
    d = item.drawing
    k = min(d.n, max(4, d.n // 3))
    part = solver.slab_partition(d, k)
    picked = []
    for p in part.parts:
        pair = solver.contained_edge(d, p)
        if pair is not None:
            picked.append(pair)
    return _pair_problems(d, picked, "slab picks")


def _check_solve_disjoint(item: CorpusItem) -> List[str]:
    d = item.drawing
    problems = []
    out = solver.solve(d, solver.MODE_PRACTICAL)
    if solver.solve(d, solver.MODE_PRACTICAL) != out:
        problems.append("practical solve not deterministic")
    problems += _pair_problems(d, out, "practical")
    if d.n >= 10:
        # undersized n0 voids the size guarantee but exercises the same
        # machinery, which must still emit a disjoint set
        params = solver.PaperParams(Fraction(1, 4), 9)
        problems += _pair_problems(
            d, solver.solve(d, solver.MODE_PAPER, params=params), "threshold mode"
        )
    return problems


def _check_greedy_halving(item: CorpusItem) -> List[str]:
    d = item.drawing
    if d.all_circular:
        try:
            solver.greedy_monotone(d)
            return ["greedy accepted an all-wrapping drawing"]
        except WrappingPairError:
            return []
    if any(e.circular for e in d.edges):
        return []
    m = solver.greedy_monotone(d)
    problems = _pair_problems(d, m, "greedy")
    if len(m) != d.n // 2:
        problems.append(f"greedy found {len(m)} edges, expected {d.n // 2}")
    return problems


def _check_oracle_dominates(item: CorpusItem) -> List[str]:
    d = item.drawing
    best = oracle.max_disjoint_bruteforce(d).size
    got = len(solver.solve(d, solver.MODE_PRACTICAL))
    problems = []
    if best < got:
        problems.append(f"exhaustive optimum {best} below solver's {got}")
    if best > d.n // 2:
        problems.append(f"optimum {best} exceeds the matching bound {d.n // 2}")
    if not any(e.circular for e in d.edges) and best != d.n // 2:
        problems.append(f"wrap-free optimum {best} != {d.n // 2}")
    return problems


def _check_regen(item: CorpusItem) -> List[str]:
    if item.regen is None:
        return []
    if mcdio.serialize_mcd(item.regen()) != mcdio.serialize_mcd(item.drawing):
        return ["regenerating from the same config changed the output"]
    return []


# ---------------------------------------------------------------------------
# registry


def _complete(item: CorpusItem) -> bool:
    return item.drawing.complete and item.drawing.n >= 4


def _flag_cap(cap: int) -> Callable[[CorpusItem], bool]:
    return lambda it: is_flag(it.drawing) and 10 <= it.drawing.n <= cap


SUITES: Tuple[Suite, ...] = (
    Suite("crossing-symmetry", lambda it: len(it.drawing.edges) <= 100,
          _check_crossing_symmetry),
    Suite("single-crossing", lambda it: len(it.drawing.edges) <= 100,
          _check_single_crossing),
    Suite("order-trichotomy", lambda it: len(it.drawing.edges) <= 100,
          _check_trichotomy),
    Suite("covered-curve-parity", lambda it: len(it.drawing.edges) <= 100,
          _check_covered_parity),
    Suite("disjoint-wrap-sides", lambda it: len(it.drawing.edges) <= 150,
          _check_wrap_sides),
    Suite("shared-vertex-order", _flag_cap(14), _check_shared_vertex_order),
    Suite("aligned-transitivity", lambda it: len(it.drawing.edges) <= 66,
          _check_transitivity),
    Suite("recut-invariance",
          lambda it: _complete(it) and it.drawing.n <= 12, _check_recut),
    Suite("four-tuple-cases", _flag_cap(14), _check_four_tuple_cases),
    Suite("fan-order", _flag_cap(16), _check_fan_order),
    Suite("side-split-separation", _flag_cap(10), _check_side_split_separation),
    Suite("extraction-replay", _flag_cap(20), _check_extraction_replay),
    Suite("structure-exists",
          lambda it: is_flag(it.drawing) and it.drawing.n >= 10,
          _check_structure_exists),
    Suite("matching-proper",
          lambda it: is_flag(it.drawing) and it.drawing.n >= 2,
          _check_matching_proper),
    Suite("induced-closure", _flag_cap(16), _check_induced_closure),
    Suite("layer-split-disjoint",
          lambda it: _complete(it) and it.drawing.n >= 10, _check_layer_split),
    Suite("wrap-cross-patterns",
          lambda it: not is_flag(it.drawing) and len(it.drawing.edges) <= 150,
          _check_wrap_cross_patterns),
    Suite("slab-pick-disjoint",
          lambda it: _complete(it) and it.drawing.n >= 12, _check_slab_pick),
    Suite("solve-disjoint", _complete, _check_solve_disjoint),
    Suite("greedy-halving", _complete, _check_greedy_halving),
    Suite("oracle-dominates",
          lambda it: _complete(it) and it.drawing.n <= 10,
          _check_oracle_dominates),
    Suite("regen-determinism", lambda it: it.regen is not None, _check_regen),
)

VALIDATOR_SUITE = "validator-accepts"
EXHIBIT_ORDER_CYCLE = "order-cycle"


# ---------------------------------------------------------------------------
# running


def minimize_failure(item: CorpusItem, suite: Suite) -> Optional[str]:
    """Shrink a failing drawing by deleting one vertex at a time while the
    suite keeps failing; the result is serialized for the report.  Vertex
    deletion is the only move, so complete drawings stay complete."""

    def still_fails(dd: Drawing) -> bool:
        probe = CorpusItem(item.name, dd)
        if not suite.applies(probe):
            return False
        try:
            return bool(suite.check(probe))
        except CylmatchError:
            return True

    d = item.drawing
    shrinking = True
    while shrinking and d.n > 2:
        shrinking = False
        for v in d.vertices:
            keep = frozenset(u.id for u in d.vertices) - {v.id}
            if len(keep) < 2:
                continue
            sub = d.induced(keep)
            if still_fails(sub):
                d = sub
                shrinking = True
                break
    return mcdio.serialize_mcd(d)


def check_item(spec: CorpusSpec) -> LemmaReport:
    """All applicable suites over one corpus item; the unit of fan-out."""
    try:
        item = build_item(spec)
    except CylmatchError as ex:
        bad = SuiteOutcome("build", f"{spec[0]}-{spec[1]}", (str(ex),))
        return LemmaReport((bad,), {})

    outcomes: List[SuiteOutcome] = []
    vmsgs = _check_validator(item)
    valid = not vmsgs
    vce = None
    if vmsgs:
        vce = minimize_failure(
            item, Suite(VALIDATOR_SUITE, lambda it: True, _check_validator)
        )
    outcomes.append(
        SuiteOutcome(VALIDATOR_SUITE, item.name, tuple(vmsgs), False, vce)
    )

    for suite in SUITES:
        if not valid or not suite.applies(item):
            outcomes.append(SuiteOutcome(suite.name, item.name, skipped=True))
            continue
        try:
            problems = suite.check(item)
        except CylmatchError as ex:
            problems = [f"raised {type(ex).__name__}: {ex}"]
        if problems:
            ce = minimize_failure(item, suite)
            outcomes.append(
                SuiteOutcome(suite.name, item.name, tuple(problems), False, ce)
            )
        else:
            outcomes.append(SuiteOutcome(suite.name, item.name))

    exhibits = {}
    if valid and _has_order_cycle(item.drawing):
        exhibits[EXHIBIT_ORDER_CYCLE] = True
    return LemmaReport(tuple(outcomes), exhibits)


def lemma_check(specs: List[CorpusSpec], workers: int = 1) -> LemmaReport:
    """Run every suite over every corpus item, optionally across processes.

    The merged report must contain the order-cycle exhibit somewhere in the
    corpus; a corpus too small to show one fails the run."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(check_item, specs))
    else:
        parts = [check_item(s) for s in specs]
    merged = merge_reports(parts)
    exhibits = {
        EXHIBIT_ORDER_CYCLE: merged.exhibits.get(EXHIBIT_ORDER_CYCLE, False)
    }
    return LemmaReport(merged.outcomes, exhibits)
