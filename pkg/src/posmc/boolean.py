"""Boolean structures: normalization and domination.

``hi`` dominates ``lo`` when, in every relation, replacing any set of
``lo`` entries of a tuple by ``hi`` keeps the tuple in the relation.  This is
checked relation by relation; :func:`dominates_via_canonical` checks the same
property on the product of all relations and exists only to validate that
shortcut on small structures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .logic import Signature
from .structures import Structure


class BooleanError(ValueError):
    pass


@dataclass(frozen=True)
class BooleanDominationWitness:
    """``tuple`` is in ``relation`` but flipping ``positions`` to ``hi`` leaves it."""

    relation: str
    tuple: tuple[int, ...]
    positions: tuple[int, ...]
    lo: int
    hi: int

    @property
    def flipped(self) -> tuple[int, ...]:
        return tuple(self.hi if i in self.positions else x for i, x in enumerate(self.tuple))

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "tuple": list(self.tuple),
            "positions": list(self.positions),
            "flipped": list(self.flipped),
        }


def require_boolean(b: Structure) -> None:
    if b.size != 2:
        raise BooleanError(f"boolean structures have universe {{0,1}}, got size {b.size}")


def is_trivial_relation(arity: int, table: frozenset) -> Optional[str]:
    if not table:
        return "empty"
    if len(table) == 2**arity:
        return "full"
    return None


def normalize(b: Structure) -> tuple[Structure, tuple[tuple[str, str], ...]]:
    """Drop empty and full relations; report what was dropped."""
    require_boolean(b)
    keep_rels, keep_tabs, dropped = [], [], []
    for name, arity, table in b.relation_items():
        kind = is_trivial_relation(arity, table)
        if kind:
            dropped.append((name, kind))
        else:
            keep_rels.append((name, arity))
            keep_tabs.append(table)
    return Structure(Signature(tuple(keep_rels)), 2, tuple(keep_tabs)), tuple(dropped)


def is_normalized(b: Structure) -> bool:
    return all(is_trivial_relation(a, t) is None for _, a, t in b.relation_items())


def _subsets(positions: list[int]) -> Iterator[tuple[int, ...]]:
    for k in range(1, len(positions) + 1):
        yield from itertools.combinations(positions, k)


def domination_violation(b: Structure, lo: int, hi: int) -> Optional[BooleanDominationWitness]:
    """First witness that ``hi`` does not dominate ``lo`` (no precondition).

    Search order: relations in signature order, tuples lexicographically,
    flip sets by increasing size.
    """
    for name, _, table in b.relation_items():
        for t in sorted(table):
            lows = [i for i, x in enumerate(t) if x == lo]
            for s in _subsets(lows):
                flipped = tuple(hi if i in s else x for i, x in enumerate(t))
                if flipped not in table:
                    return BooleanDominationWitness(name, t, s, lo, hi)
    return None


def dominates_boolean(b: Structure, lo: int, hi: int) -> Optional[BooleanDominationWitness]:
    """``None`` when ``hi`` dominates ``lo``, otherwise a violation witness."""
    require_boolean(b)
    if not is_normalized(b):
        raise BooleanError("structure has an empty or full relation; normalize it first")
    if {lo, hi} != {0, 1}:
        raise BooleanError("lo and hi must be 0 and 1 in some order")
    return domination_violation(b, lo, hi)


def canonical_relation(b: Structure) -> set[tuple[int, ...]]:
    """Product of all relations, positions concatenated in signature order."""
    out = {()}
    for _, _, table in b.relation_items():
        out = {p + t for p in out for t in table}
    return out


def dominates_via_canonical(b: Structure, lo: int, hi: int) -> bool:
    """Domination decided on the canonical relation over all partitions I|J."""
    rb = canonical_relation(b)
    r = sum(a for _, a in b.sig.relations)
    for mask in range(1 << r):
        part_i = [p for p in range(r) if mask >> p & 1]
        rest = [p for p in range(r) if not mask >> p & 1]
        for vals in itertools.product((0, 1), repeat=len(rest)):
            base = [0] * r
            for p, v in zip(rest, vals):
                base[p] = v
            low, high = list(base), list(base)
            for p in part_i:
                low[p] = lo
                high[p] = hi
            if tuple(low) in rb and tuple(high) not in rb:
                return False
    return True


def contains_constant(b: Structure, c: int) -> bool:
    """Whether the canonical relation contains the all-``c`` tuple."""
    return all((c,) * a in t for _, a, t in b.relation_items())


def all_boolean_structures(arities: tuple[int, ...], names: Optional[tuple[str, ...]] = None, normalized_only: bool = False) -> Iterator[Structure]:
    """Every boolean structure whose relations have the given arities."""
    names = names or tuple(f"R{i + 1}" for i in range(len(arities)))
    sig = Signature(tuple(zip(names, arities)))
    spaces = []
    for a in arities:
        cube = list(itertools.product((0, 1), repeat=a))
        tables = []
        for mask in range(1 << len(cube)):
            tab = frozenset(cube[i] for i in range(len(cube)) if mask >> i & 1)
            if normalized_only and is_trivial_relation(a, tab):
                continue
            tables.append(tab)
        spaces.append(tables)
    for combo in itertools.product(*spaces):
        yield Structure(sig, 2, combo)
