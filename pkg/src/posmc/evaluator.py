"""Model checking: does a finite structure satisfy a sentence?

:func:`evaluate` is the reference oracle: the sentence is miniscoped, then
evaluated by a recursive game that memoizes each subformula on the
restriction of the assignment to that subformula's free variables.
:func:`evaluate_naive` skips both steps and serves as its cross-check.  :class:`StructureBatch` evaluates one formula
on many same-sized structures at once with numpy and is what the bulk
verification suites use; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import functools
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .logic import (
    And,
    Atom,
    Const,
    Exists,
    FalseConst,
    Forall,
    Formula,
    Not,
    Or,
    PrenexSentence,
    TrueConst,
    as_formula,
    free_variables,
    miniscope,
    subformulas,
    variable_names,
)
from .structures import Structure


class EvaluationError(Exception):
    pass


Assignment = Mapping[str, int]


def _check(s: Structure, f: Formula) -> None:
    for g in subformulas(f):
        if isinstance(g, Atom):
            if g.rel not in s.sig:
                raise EvaluationError(f"relation {g.rel!r} is not in the signature {s.sig}")
            if s.sig.arity(g.rel) != len(g.args):
                raise EvaluationError(f"arity mismatch for {g.rel!r}")
            for a in g.args:
                if isinstance(a, Const) and not 0 <= a.value < s.size:
                    raise EvaluationError(f"constant {a} outside the universe")


def _lookup(s: Structure) -> dict[str, frozenset]:
    return {name: table for name, _, table in s.relation_items()}


def evaluate(s: Structure, f: Union[Formula, PrenexSentence]) -> bool:
    """Truth of the sentence ``f`` in ``s``."""
    f = as_formula(f)
    free = free_variables(f)
    if free:
        raise EvaluationError(f"free variables remain: {sorted(free)}")
    _check(s, f)
    return _Memo(s, _scoped(s, f)).run({})


def _scoped(s: Structure, f: Formula) -> Formula:
    # miniscoping drops vacuous quantifiers, which is wrong on the empty universe
    return miniscope(f) if s.size else f


def evaluate_naive(s: Structure, f: Union[Formula, PrenexSentence]) -> bool:
    """Plain recursion without memoization; used to cross-check :func:`evaluate`."""
    f = as_formula(f)
    if free_variables(f):
        raise EvaluationError("free variables remain")
    _check(s, f)
    tables = _lookup(s)
    universe = range(s.size)
    env: dict[str, int] = {}

    def ev(g: Formula) -> bool:
        if isinstance(g, Atom):
            return tuple(a.value if isinstance(a, Const) else env[a] for a in g.args) in tables[g.rel]
        if isinstance(g, And):
            return all(ev(c) for c in g.children)
        if isinstance(g, Or):
            return any(ev(c) for c in g.children)
        if isinstance(g, Not):
            return not ev(g.child)
        if isinstance(g, TrueConst):
            return True
        if isinstance(g, FalseConst):
            return False
        old = env.get(g.var)
        want = isinstance(g, Exists)
        result = not want
        for a in universe:
            env[g.var] = a
            if ev(g.body) == want:
                result = want
                break
        if old is None:
            env.pop(g.var, None)
        else:
            env[g.var] = old
        return result

    return ev(f)


class _Memo:
    def __init__(self, s: Structure, f: Formula):
        self.tables = _lookup(s)
        self.universe = range(s.size)
        self.free: dict[int, tuple[str, ...]] = {}
        self._index_free(f)
        self.memo: dict[tuple, bool] = {}
        self.root = f
        self.cache_misses = 0

    def _index_free(self, f: Formula) -> frozenset[str]:
        if isinstance(f, Atom):
            fv = frozenset(a for a in f.args if isinstance(a, str))
        elif isinstance(f, (Exists, Forall)):
            fv = self._index_free(f.body) - {f.var}
        elif isinstance(f, Not):
            fv = self._index_free(f.child)
        elif isinstance(f, (And, Or)):
            fv = frozenset().union(*(self._index_free(c) for c in f.children))
        else:
            fv = frozenset()
        self.free[id(f)] = tuple(sorted(fv))
        return fv

    def run(self, env: dict[str, int]) -> bool:
        self.env = dict(env)
        return self.ev(self.root)

    def ev(self, g: Formula) -> bool:
        env = self.env
        if isinstance(g, Atom):
            return tuple(a.value if isinstance(a, Const) else env[a] for a in g.args) in self.tables[g.rel]
        if isinstance(g, TrueConst):
            return True
        if isinstance(g, FalseConst):
            return False
        key = (id(g),) + tuple(env[v] for v in self.free[id(g)])
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.cache_misses += 1
        if isinstance(g, And):
            result = all(self.ev(c) for c in g.children)
        elif isinstance(g, Or):
            result = any(self.ev(c) for c in g.children)
        elif isinstance(g, Not):
            result = not self.ev(g.child)
        else:
            var = g.var
            old = env.get(var)
            want = isinstance(g, Exists)
            result = not want
            for a in self.universe:
                env[var] = a
                if self.ev(g.body) == want:
                    result = want
                    break
            if old is None:
                env.pop(var, None)
            else:
                env[var] = old
        self.memo[key] = result
        return result


def memo_entries(s: Structure, f: Formula) -> int:
    """Number of memo table entries created while evaluating ``f`` on ``s``."""
    m = _Memo(s, _scoped(s, as_formula(f)))
    m.run({})
    return m.cache_misses


def evaluate_ground(s: Structure, f: Formula, assignment: Optional[Assignment] = None) -> bool:
    """Evaluate a quantifier-free formula by table lookup."""
    env = dict(assignment or {})
    tables = _lookup(s)

    def ev(g: Formula) -> bool:
        if isinstance(g, Atom):
            vals = []
            for a in g.args:
                if isinstance(a, Const):
                    vals.append(a.value)
                elif a in env:
                    vals.append(env[a])
                else:
                    raise EvaluationError(f"variable {a!r} is not assigned")
            return tuple(vals) in tables[g.rel]
        if isinstance(g, And):
            return all(ev(c) for c in g.children)
        if isinstance(g, Or):
            return any(ev(c) for c in g.children)
        if isinstance(g, Not):
            return not ev(g.child)
        if isinstance(g, TrueConst):
            return True
        if isinstance(g, FalseConst):
            return False
        raise EvaluationError("evaluate_ground needs a quantifier-free formula")

    _check(s, f)
    return ev(f)


def evaluate_with(s: Structure, f: Formula, assignment: Assignment) -> bool:
    """Evaluate a formula whose free variables are all given by ``assignment``."""
    missing = free_variables(f) - set(assignment)
    if missing:
        raise EvaluationError(f"unassigned free variables: {sorted(missing)}")
    _check(s, f)
    return _Memo(s, f).run(dict(assignment))


def agree_on_suite(
    s1: Structure,
    s2: Structure,
    suite: Iterable[Union[Formula, PrenexSentence]],
    translate: Optional[Callable[[Formula], Formula]] = None,
    expect_equal: bool = True,
) -> Optional[Formula]:
    """First sentence on which ``s1`` and ``s2`` (after ``translate``) disagree.

    With ``expect_equal=False`` the verdicts are expected to differ
    everywhere, which is the shape of the complement/dual correspondence.
    """
    for phi in suite:
        phi = as_formula(phi)
        psi = translate(phi) if translate else phi
        if (evaluate(s1, phi) == evaluate(s2, psi)) != expect_equal:
            return phi
    return None


# ---------------------------------------------------------------------------
# vectorized evaluation over a batch of structures


class StructureBatch:
    """Many structures with one signature and one universe size."""

    def __init__(self, structures: Sequence[Structure]):
        structures = list(structures)
        if not structures:
            raise ValueError("empty batch")
        first = structures[0]
        self.sig = first.sig
        self.size = first.size
        self.structures = structures
        n = self.size
        self.tables: dict[str, np.ndarray] = {}
        for k, (name, arity) in enumerate(self.sig.relations):
            arr = np.zeros((len(structures),) + (n,) * arity, dtype=bool)
            for b, s in enumerate(structures):
                if s.sig != self.sig or s.size != n:
                    raise ValueError("batch members must share signature and size")
                for t in s.tables[k]:
                    arr[(b,) + t] = True
            self.tables[name] = arr

    def __len__(self):
        return len(self.structures)

    def subset(self, mask: np.ndarray) -> "StructureBatch":
        out = object.__new__(StructureBatch)
        out.sig, out.size = self.sig, self.size
        out.structures = [s for s, keep in zip(self.structures, mask) if keep]
        out.tables = {k: v[mask] for k, v in self.tables.items()}
        return out

    def evaluate(self, f: Union[Formula, PrenexSentence]) -> np.ndarray:
        """Boolean vector: truth of the sentence ``f`` in each member."""
        f = as_formula(f)
        if free_variables(f):
            raise EvaluationError("free variables remain")
        names = sorted(variable_names(f))
        axis = {v: i + 1 for i, v in enumerate(names)}
        nvars = len(names)
        n = self.size
        nb = len(self.structures)
        bidx = np.arange(nb).reshape((nb,) + (1,) * nvars)
        aranges = {}
        for v, ax in axis.items():
            shape = [1] * (nvars + 1)
            shape[ax] = n
            aranges[v] = np.arange(n).reshape(shape)
        ones = np.ones((nb,) + (1,) * nvars, dtype=bool)

        def ev(g: Formula) -> np.ndarray:
            if isinstance(g, Atom):
                if g.rel not in self.tables:
                    raise EvaluationError(f"relation {g.rel!r} is not in the signature")
                idx = [bidx]
                for a in g.args:
                    if isinstance(a, Const):
                        if not 0 <= a.value < n:
                            raise EvaluationError(f"constant {a} outside the universe")
                        idx.append(a.value)
                    else:
                        idx.append(aranges[a])
                out = self.tables[g.rel][tuple(idx)]
                return out if out.ndim == nvars + 1 else out.reshape((nb,) + (1,) * nvars)
            if isinstance(g, And):
                return functools.reduce(np.logical_and, (ev(c) for c in g.children))
            if isinstance(g, Or):
                return functools.reduce(np.logical_or, (ev(c) for c in g.children))
            if isinstance(g, Not):
                return ~ev(g.child)
            if isinstance(g, TrueConst):
                return ones
            if isinstance(g, FalseConst):
                return ~ones
            body = ev(g.body)
            ax = axis[g.var]
            shape = list(body.shape)
            shape[ax] = n
            body = np.broadcast_to(body, shape)
            if isinstance(g, Exists):
                return body.any(axis=ax, keepdims=True)
            return body.all(axis=ax, keepdims=True)

        return np.asarray(ev(f)).reshape(nb)
