"""Finite relational structures and digraphs.

The universe of a structure of size ``n`` is always ``range(n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .logic import DIGRAPH, Signature


class StructureError(Exception):
    pass


@dataclass(frozen=True)
class Structure:
    sig: Signature
    size: int
    tables: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self):
        tables = tuple(frozenset(tuple(t) for t in table) for table in self.tables)
        object.__setattr__(self, "tables", tables)
        if self.size < 0:
            raise StructureError("universe size must be non-negative")
        if len(tables) != len(self.sig.relations):
            raise StructureError("one table per relation expected")
        for (name, arity), table in zip(self.sig.relations, tables):
            for t in table:
                if len(t) != arity:
                    raise StructureError(f"tuple {t} has wrong arity for {name}/{arity}")
                if any(not 0 <= x < self.size for x in t):
                    raise StructureError(f"tuple {t} of {name} leaves the universe 0..{self.size - 1}")

    @classmethod
    def build(cls, size: int, **tables: Iterable[tuple[int, ...]]) -> "Structure":
        rels = []
        tabs = []
        for name, table in tables.items():
            table = [tuple(t) for t in table]
            if not table:
                raise StructureError(f"cannot infer arity of empty relation {name}; use the constructor")
            rels.append((name, len(table[0])))
            tabs.append(table)
        return cls(Signature(tuple(rels)), size, tuple(tabs))

    @property
    def universe(self) -> range:
        return range(self.size)

    def table(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.tables[self.sig.names.index(name)]

    def relation_items(self) -> Iterator[tuple[str, int, frozenset]]:
        for (name, arity), table in zip(self.sig.relations, self.tables):
            yield name, arity, table

    def as_digraph(self) -> "Digraph":
        if self.sig != DIGRAPH:
            raise StructureError(f"not a digraph: signature {self.sig}")
        return Digraph(self.sig, self.size, self.tables)


class Digraph(Structure):
    """A structure with the single binary relation ``E``."""

    def __post_init__(self):
        super().__post_init__()
        if self.sig != DIGRAPH:
            raise StructureError("a digraph has exactly one binary relation E")

    @classmethod
    def from_edges(cls, size: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        return cls(DIGRAPH, size, (frozenset(edges),))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self.tables[0]

    def has(self, x: int, y: int) -> bool:
        return (x, y) in self.tables[0]

    def loops(self) -> set[int]:
        return {x for x, y in self.edges if x == y}

    def __repr__(self):
        return f"Digraph({self.size}, {sorted(self.edges)})"


# ---------------------------------------------------------------------------
# text format


def render_structure(s: Structure) -> str:
    lines = [f"universe {s.size}"]
    for name, arity, table in s.relation_items():
        lines.append(f"rel {name} {arity}")
        lines.extend(" ".join(map(str, t)) for t in sorted(table))
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Structure:
    """Read the ``universe``/``rel``/``end`` format (``#`` comments allowed)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1][0] != "universe" or len(lines[0][1]) != 2:
        raise StructureError("structure must start with 'universe <n>'")
    try:
        size = int(lines[0][1][1])
    except ValueError:
        raise StructureError("universe size must be an integer") from None
    if size < 0:
        raise StructureError("universe size must be non-negative")
    rels: list[tuple[str, int]] = []
    tables: list[list[tuple[int, ...]]] = []
    i = 1
    while i < len(lines):
        lineno, words = lines[i]
        if words[0] != "rel" or len(words) != 3:
            raise StructureError(f"line {lineno}: expected 'rel <name> <arity>'")
        name = words[1]
        try:
            arity = int(words[2])
        except ValueError:
            raise StructureError(f"line {lineno}: arity must be an integer") from None
        if arity < 1:
            raise StructureError(f"line {lineno}: arity must be positive")
        if any(name == r for r, _ in rels):
            raise StructureError(f"line {lineno}: duplicate relation name {name!r}")
        i += 1
        table = []
        while True:
            if i >= len(lines):
                raise StructureError(f"relation {name!r} is missing its 'end'")
            lineno, words = lines[i]
            i += 1
            if words == ["end"]:
                break
            try:
                t = tuple(int(w) for w in words)
            except ValueError:
                raise StructureError(f"line {lineno}: tuple entries must be integers") from None
            if len(t) != arity:
                raise StructureError(f"line {lineno}: arity mismatch for {name}/{arity}")
            if any(not 0 <= x < size for x in t):
                raise StructureError(f"line {lineno}: tuple entry out of range 0..{size - 1}")
            table.append(t)
        rels.append((name, arity))
        tables.append(table)
    s = Structure(Signature(tuple(rels)), size, tuple(tables))
    return s.as_digraph() if s.sig == DIGRAPH else s


# ---------------------------------------------------------------------------
# digraph operations


def complement(h: Digraph) -> Digraph:
    n = h.size
    return Digraph.from_edges(n, ((x, y) for x in range(n) for y in range(n) if (x, y) not in h.edges))


def _transitive_closure(n: int, edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
    reach = [[(x, y) in edges for y in range(n)] for x in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {(i, j) for i in range(n) for j in range(n) if reach[i][j]}


def closure(h: Digraph, kind: str) -> Digraph:
    """``sym``, ``tran`` or ``doub`` closure of ``h``."""
    e = h.edges
    if kind == "sym":
        new = set(e) | {(y, x) for x, y in e}
    elif kind == "tran":
        new = _transitive_closure(h.size, set(e))
    elif kind == "doub":
        new = {(x, y) for x, y in e if (y, x) in e}
    else:
        raise ValueError(f"unknown closure kind {kind!r}")
    return Digraph.from_edges(h.size, new)


def symclos(h: Digraph) -> Digraph:
    return closure(h, "sym")


def tranclos(h: Digraph) -> Digraph:
    return closure(h, "tran")


def doub(h: Digraph) -> Digraph:
    return closure(h, "doub")


def is_isolated(h: Digraph, x: int) -> bool:
    return all((x, y) not in h.edges and (y, x) not in h.edges for y in h.universe)


def isolated_vertices(h: Digraph) -> list[int]:
    return [x for x in h.universe if is_isolated(h, x)]


def components(h: Digraph) -> list[frozenset[int]]:
    """Weakly connected components, in order of smallest vertex."""
    parent = list(h.universe)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in h.edges:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, set[int]] = {}
    for x in h.universe:
        groups.setdefault(find(x), set()).add(x)
    return [frozenset(groups[r]) for r in sorted(groups)]


def is_connected(h: Digraph) -> bool:
    return len(components(h)) <= 1


def induced(h: Digraph, vertices: Iterable[int]) -> Digraph:
    """Induced subdigraph, relabelled to 0..k-1 in increasing vertex order."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    return Digraph.from_edges(len(keep), ((index[x], index[y]) for x, y in h.edges if x in index and y in index))


def relabel(h: Digraph, perm: tuple[int, ...]) -> Digraph:
    """The image of ``h`` under the vertex map ``x -> perm[x]``."""
    return Digraph.from_edges(h.size, ((perm[x], perm[y]) for x, y in h.edges))


def disjoint_union(*parts: Digraph) -> Digraph:
    edges = []
    offset = 0
    for p in parts:
        edges.extend((x + offset, y + offset) for x, y in p.edges)
        offset += p.size
    return Digraph.from_edges(offset, edges)


def converse(h: Digraph) -> Digraph:
    return Digraph.from_edges(h.size, ((y, x) for x, y in h.edges))


# ---------------------------------------------------------------------------
# isomorphism


def find_isomorphism(g: Digraph, h: Digraph) -> Optional[tuple[int, ...]]:
    """A bijection ``p`` with ``(x, y) in g <=> (p[x], p[y]) in h``, or None.

    Brute force over all permutations; meant for tiny digraphs.
    """
    if g.size != h.size or len(g.edges) != len(h.edges) or len(g.loops()) != len(h.loops()):
        return None
    for perm in itertools.permutations(range(g.size)):
        if all((perm[x], perm[y]) in h.edges for x, y in g.edges):
            return perm
    return None


def is_isomorphic(g: Digraph, h: Digraph) -> bool:
    return find_isomorphism(g, h) is not None


def edge_code(h: Digraph) -> str:
    """Adjacency bits over pairs in lexicographic order, e.g. ``'010001000'``."""
    n = h.size
    return "".join("1" if (x, y) in h.edges else "0" for x in range(n) for y in range(n))


def from_code(n: int, code: str) -> Digraph:
    if len(code) != n * n or set(code) - {"0", "1"}:
        raise ValueError(f"bad edge code {code!r} for size {n}")
    return Digraph.from_edges(n, ((i // n, i % n) for i, c in enumerate(code) if c == "1"))


def canonical_code(h: Digraph) -> str:
    """Lexicographically smallest edge code over all relabellings."""
    return min(edge_code(relabel(h, p)) for p in itertools.permutations(range(h.size)))


def all_digraphs(n: int) -> Iterator[Digraph]:
    """All ``2**(n*n)`` labelled digraphs on ``n`` vertices, in edge-code order."""
    pairs = [(x, y) for x in range(n) for y in range(n)]
    m = len(pairs)
    for mask in range(1 << m):
        yield Digraph.from_edges(n, (pairs[i] for i in range(m) if mask >> (m - 1 - i) & 1))


# ---------------------------------------------------------------------------
# twins


def is_twin_pair(h: Digraph, x: int, y: int) -> bool:
    if x == y:
        return False
    e = h.edges
    return all(((x, z) in e) == ((y, z) in e) and ((z, x) in e) == ((z, y) in e) for z in h.universe)


def find_twins(h: Digraph) -> list[tuple[int, int]]:
    """Ordered pairs ``(x, y)``, ``x < y``, with identical in- and out-neighbourhoods."""
    return [(x, y) for x in h.universe for y in h.universe if x < y and is_twin_pair(h, x, y)]


def contract_twin(h: Digraph, x: int, y: int) -> Digraph:
    """Delete ``x``, which must be a twin of ``y``."""
    if not is_twin_pair(h, x, y):
        raise StructureError(f"vertices {x} and {y} are not twins")
    return induced(h, (v for v in h.universe if v != x))
