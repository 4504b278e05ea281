"""Canon vertices and good pairs of digraphs.

A forall-canon is a vertex dominated by every vertex, an exists-canon one
that dominates every vertex.  Universally quantified variables of a positive
sentence can be pinned to a forall-canon, existential ones to an
exists-canon, without changing its truth.

A good pair ``(x, y)`` allows both at once: universals to ``x`` and
existentials to ``y``.  The four conditions below are checked literally:

* G1: if there is any edge, ``y`` carries a loop;
* G2: ``E(x, v) => E(x, y)`` and ``E(v, x) => E(y, x)`` for every ``v``;
* G3: ``E(x, y) => E(v, y)`` and ``E(y, x) => E(y, v)`` for every ``v``;
* G4: a loop at ``x`` forces the complete reflexive digraph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .structures import Digraph


def is_forall_canon(h: Digraph, x: int) -> bool:
    e = h.edges
    V = h.universe
    for y in V:
        if (x, y) in e and not all((z, y) in e for z in V):
            return False
        if (y, x) in e and not all((y, z) in e for z in V):
            return False
    return True


def is_exists_canon(h: Digraph, x: int) -> bool:
    e = h.edges
    return all((x, z) in e and (y, x) in e for y, z in e)


def forall_canons(h: Digraph) -> frozenset[int]:
    return frozenset(x for x in h.universe if is_forall_canon(h, x))


def exists_canons(h: Digraph) -> frozenset[int]:
    return frozenset(x for x in h.universe if is_exists_canon(h, x))


def is_good_pair(h: Digraph, x: int, y: int) -> bool:
    e = h.edges
    V = h.universe
    if e and (y, y) not in e:
        return False
    for v in V:
        if (x, v) in e and (x, y) not in e:
            return False
        if (v, x) in e and (y, x) not in e:
            return False
    if (x, y) in e and not all((v, y) in e for v in V):
        return False
    if (y, x) in e and not all((y, v) in e for v in V):
        return False
    if (x, x) in e and len(e) != h.size * h.size:
        return False
    return True


def good_pairs(h: Digraph) -> frozenset[tuple[int, int]]:
    return frozenset((x, y) for x in h.universe for y in h.universe if is_good_pair(h, x, y))


@dataclass(frozen=True)
class CanonReport:
    forall_canons: frozenset[int]
    exists_canons: frozenset[int]
    good_pairs: frozenset[tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "forall_canons": sorted(self.forall_canons),
            "exists_canons": sorted(self.exists_canons),
            "good_pairs": [list(p) for p in sorted(self.good_pairs)],
        }


def canon_report(h: Digraph) -> CanonReport:
    return CanonReport(forall_canons(h), exists_canons(h), good_pairs(h))
