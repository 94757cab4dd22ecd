"""MCD1 drawing files and the matching text format.

MCD1 is line oriented: a ``mcd 1`` header, an ``n <count>`` line, one ``v``
line per vertex, then one ``e`` line per edge carrying its full lift
polyline. Every rational travels as ``num/den`` in lowest terms with a
positive denominator; the parser refuses anything else so files are
canonical and byte-for-byte diffable.

Matchings use a second, smaller grammar: ``match <size>``, one ``pair``
line per edge ordered by height at the cut line, then one ``wit`` line per
unordered pair naming the below edge, the above edge, the witness kind and,
for separator witnesses, the separating edge.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import InvariantError, ParseError
from .flags import Pair, ProperMatching, Witness, WIT_SEPARATOR
from .geometry import Drawing, EdgeCurve, Vertex, new_drawing


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class _Line:
    """One tokenized line, tracking columns for error reports."""

    def __init__(self, text: str, no: int):
        self.text = text
        self.no = no
        self.toks = text.split()
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.toks)

    def _col(self) -> int:
        # column of the *next* token, or just past the end
        seen = 0
        idx = 0
        for tok in self.toks[: self.pos + 1]:
            idx = self.text.index(tok, idx)
            seen = idx + 1
            idx += len(tok)
        return seen if self.pos < len(self.toks) else len(self.text) + 1

    def fail(self, msg: str) -> ParseError:
        return ParseError(msg, self.no, self._col())

    def take(self, what: str) -> str:
        if self.done():
            raise self.fail(f"expected {what}, line ended")
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def int(self, what: str) -> int:
        tok = self.take(what)
        try:
            return int(tok)
        except ValueError:
            self.pos -= 1
            raise self.fail(f"expected integer {what}, got {tok!r}") from None

    def rational(self, what: str) -> Fraction:
        tok = self.take(what)
        head, sep, tail = tok.partition("/")
        try:
            if not sep:
                raise ValueError
            num, den = int(head), int(tail)
        except ValueError:
            self.pos -= 1
            raise self.fail(f"expected rational {what}, got {tok!r}") from None
        self.pos -= 1
        if den == 0:
            raise self.fail(f"zero denominator in {tok!r}")
        if den < 0:
            raise self.fail(f"denominator must be positive in {tok!r}")
        if math.gcd(abs(num), den) != 1:
            raise self.fail(f"unreduced rational {tok!r}")
        self.pos += 1
        return Fraction(num, den)

    def end(self) -> None:
        if not self.done():
            raise self.fail(f"trailing tokens: {' '.join(self.toks[self.pos:])!r}")


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.at = 0

    def next(self, what: str) -> _Line:
        while self.at < len(self.lines):
            raw = self.lines[self.at]
            self.at += 1
            if raw.strip():
                return _Line(raw, self.at)
        raise ParseError(f"file ends before {what}", max(len(self.lines), 1))

    def exhausted(self) -> bool:
        return all(not raw.strip() for raw in self.lines[self.at:])


# ---------------------------------------------------------------------------
# drawings


def serialize_mcd(d: Drawing) -> str:
    out: List[str] = ["mcd 1", f"n {d.n}"]
    for v in d.vertices:
        out.append(f"v {v.id} {_fmt(v.x)} {_fmt(v.y)}")
    for e in d.edges:
        pts = " ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in e.points)
        out.append(f"e {e.u} {e.v} {1 if e.circular else 0} {len(e.points)} {pts}")
    return "\n".join(out) + "\n"


def parse_mcd(text: str) -> Drawing:
    rd = _Reader(text)

    ln = rd.next("header")
    if ln.toks != ["mcd", "1"]:
        raise ln.fail("expected header 'mcd 1'")

    ln = rd.next("vertex count")
    if ln.take("keyword") != "n":
        raise ln.fail("expected 'n <count>'")
    n = ln.int("vertex count")
    ln.end()
    if n < 0:
        raise ln.fail("vertex count must be nonnegative")

    verts: List[Vertex] = []
    seen: Dict[int, int] = {}
    for _ in range(n):
        ln = rd.next("vertex line")
        if ln.take("keyword") != "v":
            raise ln.fail("expected vertex line")
        vid = ln.int("vertex id")
        x = ln.rational("x")
        y = ln.rational("y")
        ln.end()
        if vid in seen:
            raise InvariantError(f"duplicate vertex id {vid} on line {ln.no}")
        seen[vid] = ln.no
        verts.append(Vertex(vid, x, y))
    by_id = {v.id: v for v in verts}

    edges: List[EdgeCurve] = []
    pairs_seen: set = set()
    while not rd.exhausted():
        ln = rd.next("edge line")
        if ln.take("keyword") != "e":
            raise ln.fail("expected edge line")
        u = ln.int("endpoint u")
        v = ln.int("endpoint v")
        wrap = ln.int("wrap flag")
        if wrap not in (0, 1):
            raise ln.fail(f"wrap flag must be 0 or 1, got {wrap}")
        k = ln.int("point count")
        if k < 2:
            raise ln.fail("polyline needs at least 2 points")
        pts = tuple((ln.rational("point x"), ln.rational("point y")) for _ in range(k))
        ln.end()
        if u not in by_id or v not in by_id:
            raise InvariantError(f"edge {u}-{v} on line {ln.no} references unknown vertex")
        if (u, v) in pairs_seen:
            raise InvariantError(f"duplicate edge {u}-{v} on line {ln.no}")
        pairs_seen.add((u, v))
        a, b = by_id[u], by_id[v]
        if a.x >= b.x:
            raise InvariantError(f"edge {u}-{v} on line {ln.no}: endpoints not in x order")
        want = ((b.x, b.y), (a.x + 1, a.y)) if wrap else ((a.x, a.y), (b.x, b.y))
        if (pts[0], pts[-1]) != want:
            raise InvariantError(
                f"edge {u}-{v} on line {ln.no}: polyline ends do not match its endpoints"
            )
        edges.append(EdgeCurve(u, v, bool(wrap), pts))

    if len(verts) < n:
        raise ParseError("file truncated inside vertex block", max(len(rd.lines), 1))
    return new_drawing(verts, edges)


# ---------------------------------------------------------------------------
# matchings


def _pair_key(a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    return (a, b) if a <= b else (b, a)


def serialize_matching(m: ProperMatching) -> str:
    out = [f"match {len(m.edges)}"]
    for u, v in m.edges:
        out.append(f"pair {u} {v}")
    for _, w in sorted(m.witnesses.items()):
        line = f"wit {w.below[0]} {w.below[1]} {w.above[0]} {w.above[1]} {w.kind}"
        if w.separator is not None:
            line += f" {w.separator[0]} {w.separator[1]}"
        out.append(line)
    return "\n".join(out) + "\n"


def parse_matching(text: str) -> ProperMatching:
    rd = _Reader(text)
    ln = rd.next("match header")
    if ln.take("keyword") != "match":
        raise ln.fail("expected 'match <size>'")
    size = ln.int("size")
    ln.end()
    if size < 0:
        raise ln.fail("size must be nonnegative")

    edges: List[Pair] = []
    for _ in range(size):
        ln = rd.next("pair line")
        if ln.take("keyword") != "pair":
            raise ln.fail("expected pair line")
        u = ln.int("u")
        v = ln.int("v")
        ln.end()
        edges.append((u, v))

    witnesses: Dict[Tuple[Pair, Pair], Witness] = {}
    while not rd.exhausted():
        ln = rd.next("wit line")
        if ln.take("keyword") != "wit":
            raise ln.fail("expected wit line")
        below = (ln.int("u1"), ln.int("v1"))
        above = (ln.int("u2"), ln.int("v2"))
        kind = ln.take("kind")
        sep = None
        if kind == WIT_SEPARATOR:
            sep = (ln.int("gu"), ln.int("gv"))
        ln.end()
        if below not in edges or above not in edges:
            raise InvariantError(f"wit line {ln.no} names a pair outside the matching")
        witnesses[_pair_key(below, above)] = Witness(kind, below, above, sep)
    return ProperMatching(tuple(edges), witnesses)
