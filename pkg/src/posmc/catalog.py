"""Named structures.

Vertices ``a, b, c`` are ``0, 1, 2``.  Superscripts in the usual names are
written inline: ``P010_3`` is the undirected 2-path with a loop on its middle
vertex, ``DP110_3`` the directed path ``a -> b -> c`` with loops at ``a`` and
``b``, ``K11_2`` the complete reflexive digraph on two vertices, and so on.
``bar`` marks a complement and ``+`` a disjoint union.  Any name may be
prefixed with ``~`` to ask for the complement of the entry.

Entries are ``PAPER-FIXED`` when their edge set follows from the name alone.
The ``H`` family is ``RECONSTRUCTED``: each such entry carries a shape family
and a list of constraints, and :func:`verify_reconstruction` checks that the
constraints pick out exactly one isomorphism class within the family,
namely the class of the stored digraph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .canons import exists_canons, forall_canons, good_pairs, is_exists_canon, is_forall_canon
from .logic import Signature
from .structures import (
    Digraph,
    Structure,
    all_digraphs,
    complement,
    doub,
    find_twins,
    is_isomorphic,
    tranclos,
)

PAPER_FIXED = "PAPER-FIXED"
RECONSTRUCTED = "RECONSTRUCTED"


class CatalogError(KeyError):
    pass


Predicate = Callable[[Digraph], bool]


@dataclass(frozen=True)
class Constraint:
    text: str
    test: Predicate = field(compare=False)

    def __call__(self, h: Digraph) -> bool:
        return self.test(h)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    structure: Structure
    provenance: str
    family: Optional[Constraint] = None
    constraints: tuple[Constraint, ...] = ()

    @property
    def digraph(self) -> Digraph:
        return self.structure.as_digraph()


def _g(n: int, edges: str) -> Digraph:
    """Digraph from a compact edge list like ``"ab bc bb"``."""
    pairs = [("abc".index(w[0]), "abc".index(w[1])) for w in edges.split()]
    return Digraph.from_edges(n, pairs)


def _bool(name: str, arity: int, tuples) -> Structure:
    return Structure(Signature(((name, arity),)), 2, (frozenset(tuples),))


_FIXED: dict[str, Structure] = {
    "K1": _g(1, ""),
    "K1_1": _g(1, "aa"),
    "K2": _g(2, "ab ba"),
    "K2bar": _g(2, "aa bb"),
    "K11_2": _g(2, "aa ab ba bb"),
    "K3": _g(3, "ab ba bc cb ac ca"),
    "K3bar": _g(3, "aa bb cc"),
    "K111_3": _g(3, "aa ab ac ba bb bc ca cb cc"),
    "K1+K2": _g(3, "bc cb"),
    "K1+K1+K1": _g(3, ""),
    "K1_1+K11_2": _g(3, "aa bb bc cb cc"),
    "P000_3": _g(3, "ab ba bc cb"),
    "P010_3": _g(3, "ab ba bc cb bb"),
    "P100_3": _g(3, "ab ba bc cb aa"),
    "P101_3": _g(3, "ab ba bc cb aa cc"),
    "P110_3": _g(3, "ab ba bc cb aa bb"),
    "P111_3": _g(3, "ab ba bc cb aa bb cc"),
    "DP000_3": _g(3, "ab bc"),
    "DP010_3": _g(3, "ab bc bb"),
    "DP100_3": _g(3, "ab bc aa"),
    "DP110_3": _g(3, "ab bc aa bb"),
    "DP011_3": _g(3, "ab bc bb cc"),
    "B_NAE": _bool("NAE", 3, [t for t in itertools.product((0, 1), repeat=3) if len(set(t)) > 1]),
    "B1": _bool("R", 3, [(0, 0, 0), (0, 0, 1)]),
    "B2": _bool("R", 3, [(0, 0, 0), (0, 1, 1)]),
}


# ---------------------------------------------------------------------------
# shape families and constraints for the reconstructed entries


def _pair_type(h: Digraph, end: int, mid: int) -> str:
    fwd, back = h.has(end, mid), h.has(mid, end)
    if fwd and back:
        return "double"
    if fwd:
        return "in"
    if back:
        return "out"
    return "none"


def _path_with_loops(loops: set[int]) -> Constraint:
    def test(h: Digraph) -> bool:
        if h.size != 3 or h.loops() != loops:
            return False
        if h.has(0, 2) or h.has(2, 0):
            return False
        return _pair_type(h, 0, 1) != "none" and _pair_type(h, 2, 1) != "none"

    where = "+".join("abc"[v] for v in sorted(loops))
    return Constraint(f"underlying graph is the path a-b-c, loops exactly at {where}", test)


def _underlying_edges(h: Digraph) -> set[frozenset[int]]:
    return {frozenset(p) for p in h.edges if p[0] != p[1]}


def _one_loop_tournament() -> Constraint:
    def test(h: Digraph) -> bool:
        if h.size != 3 or len(h.loops()) != 1 or len(_underlying_edges(h)) != 3:
            return False
        return all(not (h.has(x, y) and h.has(y, x)) for x in range(3) for y in range(3) if x != y)

    return Constraint("orientation of the triangle with exactly one loop", test)


def _out_degrees(h: Digraph) -> list[int]:
    return [sum(h.has(x, y) for y in range(3) if y != x) for x in range(3)]


MIDDLE_LOOP = _path_with_loops({1})
TWO_LOOPS = _path_with_loops({0, 1})
TOURNAMENT = _one_loop_tournament()


def _c(text: str, test: Predicate) -> Constraint:
    return Constraint(text, test)


_twins = _c("a and c are twins", lambda h: (0, 2) in find_twins(h))
_no_twins = _c("no twin pair", lambda h: not find_twins(h))
_no_double = _c("no double edge", lambda h: not any(h.has(x, y) and h.has(y, x) for x in range(3) for y in range(3) if x != y))
_into_b = _c("every path edge points into b", lambda h: _pair_type(h, 0, 1) == "in" and _pair_type(h, 2, 1) == "in")
_out_of_b = _c("every path edge points out of b", lambda h: _pair_type(h, 0, 1) == "out" and _pair_type(h, 2, 1) == "out")
_canons_cb = _c("c is a forall-canon and b an exists-canon", lambda h: is_forall_canon(h, 2) and is_exists_canon(h, 1))
_c_canon_b_not = _c(
    "c is a forall-canon and b is not an exists-canon",
    lambda h: is_forall_canon(h, 2) and not is_exists_canon(h, 1),
)
_ab_double = _c("a <-> b is a double edge", lambda h: _pair_type(h, 0, 1) == "double")
_cb_in = _c("the b-c edge is the single edge c -> b", lambda h: _pair_type(h, 2, 1) == "in")
_cb_out = _c("the b-c edge is the single edge b -> c", lambda h: _pair_type(h, 2, 1) == "out")
_ab_in = _c("the a-b edge is the single edge a -> b", lambda h: _pair_type(h, 0, 1) == "in")
_ab_out = _c("the a-b edge is the single edge b -> a", lambda h: _pair_type(h, 0, 1) == "out")


def _doub_tran_kernel(h: Digraph) -> bool:
    return is_isomorphic(doub(tranclos(h)), _FIXED["K1_1+K11_2"])


_kernel = _c("doub(tranclos(H)) is K1_1+K11_2", _doub_tran_kernel)

_cyclic = _c("the orientation is cyclic", lambda h: sorted(_out_degrees(h)) == [1, 1, 1])
_transitive = _c("the orientation is transitive", lambda h: sorted(_out_degrees(h)) == [0, 1, 2])


def _loop_at_rank(rank: int) -> Predicate:
    # rank 2 = source, 1 = middle, 0 = sink (non-loop out-degree)
    return lambda h: _out_degrees(h)[next(iter(h.loops()))] == rank


_loop_source = _c("the loop sits on the source", _loop_at_rank(2))
_loop_sink = _c("the loop sits on the sink", _loop_at_rank(0))
_comp_loopless_forall = _c(
    "the complement has a loopless forall-canon",
    lambda h: any(not complement(h).has(x, x) for x in forall_canons(complement(h))),
)
_comp_pair_no_canon = _c(
    "the complement has a good pair but no canon",
    lambda h: bool(good_pairs(complement(h))) and not forall_canons(complement(h)) and not exists_canons(complement(h)),
)


def _h6_gadget(h: Digraph) -> bool:
    from .reductions import gadget, interpret_gadget

    return is_isomorphic(interpret_gadget(complement(h), gadget("H6bar-defines-DP100bar")), complement(_FIXED["DP100_3"]))


_h6_defines = _c("the H6bar display formula defines ~DP100_3 over the complement", _h6_gadget)

_RECON: dict[str, tuple[Digraph, Constraint, tuple[Constraint, ...]]] = {
    "H1": (_g(3, "ab cb bb"), MIDDLE_LOOP, (_twins, _no_double, _into_b)),
    "H1'": (_g(3, "ba bc bb"), MIDDLE_LOOP, (_twins, _no_double, _out_of_b)),
    "H2": (_g(3, "ab ba cb bb"), MIDDLE_LOOP, (_canons_cb, _no_twins, _ab_double, _cb_in)),
    "H2'": (_g(3, "ab ba bc bb"), MIDDLE_LOOP, (_canons_cb, _no_twins, _ab_double, _cb_out)),
    "H3": (_g(3, "ab ba bc aa bb"), TWO_LOOPS, (_canons_cb, _ab_double, _cb_out)),
    "H3'": (_g(3, "ab ba cb aa bb"), TWO_LOOPS, (_canons_cb, _ab_double, _cb_in)),
    "H4": (_g(3, "ab cb aa bb"), TWO_LOOPS, (_c_canon_b_not, _ab_in)),
    "H4'": (_g(3, "ba bc aa bb"), TWO_LOOPS, (_c_canon_b_not, _ab_out)),
    "H5": (_g(3, "ab bc cb aa bb"), TWO_LOOPS, (_kernel, _ab_in)),
    "H5'": (_g(3, "ba bc cb aa bb"), TWO_LOOPS, (_kernel, _ab_out)),
    "H6": (_g(3, "ab bc ca aa"), TOURNAMENT, (_h6_defines, _cyclic)),
    "H7": (_g(3, "ab bc ac aa"), TOURNAMENT, (_comp_pair_no_canon, _transitive, _loop_source)),
    "H7'": (_g(3, "ab bc ac cc"), TOURNAMENT, (_comp_pair_no_canon, _transitive, _loop_sink)),
    "H8": (_g(3, "ab bc ac bb"), TOURNAMENT, (_comp_loopless_forall,)),
}


def names() -> list[str]:
    return list(_FIXED) + list(_RECON)


def catalog(name: str) -> CatalogEntry:
    if name.startswith("~"):
        base = catalog(name[1:])
        return CatalogEntry(name, complement(base.digraph), base.provenance, base.family, base.constraints)
    if name in _FIXED:
        return CatalogEntry(name, _FIXED[name], PAPER_FIXED)
    if name in _RECON:
        h, fam, cons = _RECON[name]
        return CatalogEntry(name, h, RECONSTRUCTED, fam, cons)
    raise CatalogError(f"unknown catalog name {name!r}")


def digraph(name: str) -> Digraph:
    return catalog(name).digraph


def structure(name: str) -> Structure:
    return catalog(name).structure


def reconstruction_solutions(name: str) -> list[Digraph]:
    """All size-3 digraphs in the entry's family that meet every constraint."""
    entry = catalog(name)
    if entry.provenance != RECONSTRUCTED or entry.family is None:
        raise CatalogError(f"{name} is not a reconstructed entry")
    return [h for h in all_digraphs(3) if entry.family(h) and all(c(h) for c in entry.constraints)]


def verify_reconstruction(name: str) -> list[Digraph]:
    """Check that the constraints of ``name`` determine it up to isomorphism."""
    entry = catalog(name)
    sols = reconstruction_solutions(name)
    h = entry.digraph
    if h not in sols:
        raise CatalogError(f"{name}: stored digraph violates its constraints")
    for s in sols:
        if not is_isomorphic(s, h):
            raise CatalogError(f"{name}: constraints admit the non-isomorphic solution {sorted(s.edges)}")
    return sols


def lookup_isomorphic(h: Digraph, candidates: Optional[list[str]] = None) -> Optional[str]:
    """Name of the first catalog digraph isomorphic to ``h``."""
    for name in candidates if candidates is not None else names():
        entry = catalog(name)
        if entry.structure.sig.relations == (("E", 2),) and is_isomorphic(entry.digraph, h):
            return name
    return None
