"""Brute-force ground truth for small instances.

The conflict graph has one node per drawn edge and joins two nodes when the
edges intersect anywhere, endpoint or crossing. A maximum independent set
in it is exactly a maximum pairwise-disjoint edge set, so an exact solver
over this graph bounds every heuristic the package ships.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Tuple

from .errors import TooLargeError
from .geometry import Drawing, crossing_count

Pair = Tuple[int, int]

MIS_CAP = 12  # C(12,2) = 66 conflict nodes; branch-and-bound stays sub-second


@dataclass(frozen=True)
class ConflictGraph:
    nodes: Tuple[Pair, ...]
    neighbors: Dict[Pair, FrozenSet[Pair]]

    def adjacent(self, a: Pair, b: Pair) -> bool:
        return b in self.neighbors[a]


def conflict_graph(d: Drawing) -> ConflictGraph:
    nodes = tuple(sorted(e.pair for e in d.edges))
    by_pair = {e.pair: e for e in d.edges}
    nbrs: Dict[Pair, set] = {p: set() for p in nodes}
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if set(a) & set(b) or crossing_count(by_pair[a], by_pair[b]):
                nbrs[a].add(b)
                nbrs[b].add(a)
    return ConflictGraph(nodes, {p: frozenset(s) for p, s in nbrs.items()})


@dataclass(frozen=True)
class OracleResult:
    edges: Tuple[Pair, ...]
    size: int


def max_disjoint_bruteforce(d: Drawing, force: bool = False) -> OracleResult:
    """Exact maximum set of pairwise disjoint edges.

    Branch and bound over the conflict graph: nodes are tried in ascending
    pair order with the include branch first, so the first optimum reached
    is the lexicographically smallest one and later ties never replace it.
    The bound is a greedy clique cover of the remaining candidates (each
    clique contributes at most one node).
    """
    if d.n > MIS_CAP and not force:
        raise TooLargeError(
            f"n={d.n} exceeds the oracle cap of {MIS_CAP}; "
            "pass force=True to accept exponential cost"
        )
    cg = conflict_graph(d)
    nodes = cg.nodes
    k = len(nodes)
    index = {p: i for i, p in enumerate(nodes)}
    nbr_mask = [0] * k
    for p, nb in cg.neighbors.items():
        for q in nb:
            nbr_mask[index[p]] |= 1 << index[q]

    def cover_bound(mask: int) -> int:
        cliques: List[int] = []
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            for ci in range(len(cliques)):
                if cliques[ci] & ~nbr_mask[i] == 0:
                    cliques[ci] |= 1 << i
                    break
            else:
                cliques.append(1 << i)
        return len(cliques)

    best: List[int] = []

    def dfs(cand: int, acc: List[int]) -> None:
        nonlocal best
        if not cand:
            if len(acc) > len(best):
                best = acc[:]
            return
        if len(acc) + cover_bound(cand) <= len(best):
            return
        i = (cand & -cand).bit_length() - 1
        acc.append(i)
        dfs(cand & ~(1 << i) & ~nbr_mask[i], acc)
        acc.pop()
        dfs(cand & ~(1 << i), acc)

    dfs((1 << k) - 1, [])
    chosen = tuple(nodes[i] for i in best)
    return OracleResult(chosen, len(chosen))
