"""Sentence generators used as test suites.

Exhaustive mode lists prenex sentences whose matrix is a disjunction of
conjunctions of atoms.  Bound variables are named ``x, y, z, w, u, v`` (then
``x7, x8, ...``) in prefix order and every one of them occurs in the matrix,
so two sentences that differ only by renaming are never both produced.
Conjunctions and disjunctions are kept sorted, which removes duplicates that
differ only by the order of operands.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from .logic import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    PrenexSentence,
    Signature,
    conjoin,
    disjoin,
    free_variables,
)

NAMES = ("x", "y", "z", "w", "u", "v")


def var_names(k: int) -> tuple[str, ...]:
    return tuple(NAMES[i] if i < len(NAMES) else f"x{i + 1}" for i in range(k))


def _literals(sig: Signature, variables: tuple[str, ...], negation: bool) -> list[Formula]:
    out: list[Formula] = []
    for name, arity in sig.relations:
        for args in itertools.product(variables, repeat=arity):
            a = Atom(name, args)
            out.append(a)
            if negation:
                out.append(Not(a))
    return out


def _partitions(total: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive ints summing to ``total``."""

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for k in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - k, k):
                yield (k,) + rest

    yield from rec(total, total)


def _matrices(lits: list[Formula], max_atoms: int) -> Iterator[Formula]:
    """Disjunctions of conjunctions with at most ``max_atoms`` literal occurrences."""
    for total in range(1, max_atoms + 1):
        for shape in _partitions(total):
            # clauses of equal size are chosen as strictly increasing tuples
            # of clause indices, which makes the disjunction a sorted set
            clause_lists = {k: list(itertools.combinations(range(len(lits)), k)) for k in set(shape)}
            groups = []
            for k in sorted(set(shape), reverse=True):
                count = shape.count(k)
                groups.append(list(itertools.combinations(range(len(clause_lists[k])), count)))
            sizes = sorted(set(shape), reverse=True)
            for pick in itertools.product(*groups):
                clauses = []
                for k, chosen in zip(sizes, pick):
                    for ci in chosen:
                        clauses.append(conjoin(lits[j] for j in clause_lists[k][ci]))
                yield disjoin(clauses)


def _uses_all(f: Formula, variables: tuple[str, ...]) -> bool:
    seen: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            seen.update(g.args)
        elif isinstance(g, Not):
            stack.append(g.child)
        elif isinstance(g, (And, Or)):
            stack.extend(g.children)
    return seen >= set(variables)


def enumerate_sentences(
    sig: Signature,
    max_quantifiers: int,
    max_atoms: int,
    mode: str = "exhaustive",
    seed: int = 0,
    count: int = 500,
    negation: bool = False,
    min_quantifiers: int = 1,
) -> Iterator[PrenexSentence]:
    """Stream prenex sentences over ``sig``.

    ``mode="exhaustive"`` yields every sentence within the bounds;
    ``mode="random"`` yields ``count`` sentences drawn with ``random.Random(seed)``.
    ``negation`` allows negated atoms in the matrix.
    """
    if max_quantifiers < 1 or max_atoms < 1:
        raise ValueError("bounds must be at least 1")
    if mode == "exhaustive":
        for q in range(min_quantifiers, max_quantifiers + 1):
            variables = var_names(q)
            lits = _literals(sig, variables, negation)
            matrices = [m for m in _matrices(lits, max_atoms) if _uses_all(m, variables)]
            for quants in itertools.product(("exists", "forall"), repeat=q):
                prefix = tuple(zip(quants, variables))
                for m in matrices:
                    yield PrenexSentence(prefix, m)
    elif mode in ("random", "seeded-random"):
        rng = random.Random(seed)
        for _ in range(count):
            yield random_prenex(sig, rng, max_quantifiers, max_atoms, negation, min_quantifiers)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def random_prenex(
    sig: Signature,
    rng: random.Random,
    max_quantifiers: int,
    max_atoms: int,
    negation: bool = False,
    min_quantifiers: int = 1,
) -> PrenexSentence:
    q = rng.randint(min_quantifiers, max_quantifiers)
    variables = var_names(q)
    prefix = tuple((rng.choice(("exists", "forall")), v) for v in variables)
    n_atoms = rng.randint(1, max_atoms)
    lits = []
    for _ in range(n_atoms):
        name, arity = rng.choice(sig.relations)
        a = Atom(name, tuple(rng.choice(variables) for _ in range(arity)))
        lits.append(Not(a) if negation and rng.random() < 0.3 else a)
    # random split of the literal list into clauses
    clauses = []
    current = []
    for lit in lits:
        current.append(lit)
        if rng.random() < 0.5:
            clauses.append(conjoin(current))
            current = []
    if current:
        clauses.append(conjoin(current))
    return PrenexSentence(prefix, disjoin(clauses))


def random_formula(
    sig: Signature,
    rng: random.Random,
    depth: int = 4,
    negation: bool = False,
    variables: Optional[list[str]] = None,
    bound: Optional[list[str]] = None,
) -> Formula:
    """Random formula tree with quantifiers anywhere; may have free variables."""
    variables = variables or ["x", "y", "z", "w"]
    bound = list(bound or [])
    pool = bound or variables
    roll = rng.random()
    if depth <= 0 or roll < 0.2:
        name, arity = rng.choice(sig.relations)
        return Atom(name, tuple(rng.choice(pool) for _ in range(arity)))
    if roll < 0.45:
        var = rng.choice(variables)
        body = random_formula(sig, rng, depth - 1, negation, variables, bound + [var])
        return Exists(var, body) if rng.random() < 0.5 else Forall(var, body)
    if negation and roll < 0.55:
        return Not(random_formula(sig, rng, depth - 1, negation, variables, bound))
    k = rng.randint(2, 3)
    parts = tuple(random_formula(sig, rng, depth - 1, negation, variables, bound) for _ in range(k))
    return And(parts) if rng.random() < 0.5 else Or(parts)


def random_sentence(sig: Signature, rng: random.Random, depth: int = 4, negation: bool = False) -> Formula:
    """Random non-prenex sentence: every atom sits under binders for its variables."""
    f = random_formula(sig, rng, depth, negation)
    for v in sorted(free_variables(f)):
        f = Exists(v, f) if rng.random() < 0.5 else Forall(v, f)
    return f
