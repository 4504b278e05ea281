import itertools

import pytest

from posmc import catalog
from posmc.boolean import (
    BooleanError,
    all_boolean_structures,
    canonical_relation,
    contains_constant,
    dominates_boolean,
    dominates_via_canonical,
    domination_violation,
    is_normalized,
    normalize,
)
from posmc.evaluator import evaluate
from posmc.logic import Signature, instantiate
from posmc.structures import Structure
from posmc.suites import enumerate_sentences

B1 = catalog.structure("B1")
B2 = catalog.structure("B2")


def test_b1_zero_dominates_one():
    assert dominates_boolean(B1, lo=1, hi=0) is None
    w = dominates_boolean(B1, lo=0, hi=1)
    assert w is not None and w.flipped not in B1.table("R")


def test_b2_neither_direction():
    w = dominates_boolean(B2, lo=0, hi=1)
    assert (w.tuple, w.positions, w.flipped) == ((0, 0, 0), (0,), (1, 0, 0))
    w = dominates_boolean(B2, lo=1, hi=0)
    assert w is not None and w.tuple in B2.table("R") and w.flipped not in B2.table("R")


def test_vacuous_domination():
    s = Structure.build(2, R=[(1, 1)])
    assert dominates_boolean(s, lo=0, hi=1) is None


def test_preconditions():
    full = Structure.build(2, R=list(itertools.product((0, 1), repeat=2)))
    with pytest.raises(BooleanError):
        dominates_boolean(full, 0, 1)
    with pytest.raises(BooleanError):
        dominates_boolean(B1, 0, 0)
    with pytest.raises(BooleanError):
        normalize(catalog.structure("K3"))


def test_normalize():
    s = Structure(Signature((("A", 2), ("B", 1), ("C", 2))), 2, (frozenset(), frozenset({(0,), (1,)}), frozenset({(0, 1)})))
    n, dropped = normalize(s)
    assert dropped == (("A", "empty"), ("B", "full"))
    assert n.sig.names == ("C",) and is_normalized(n)
    assert not is_normalized(s)


def test_contains_constant():
    assert contains_constant(B2, 0) and not contains_constant(B2, 1)
    assert not contains_constant(catalog.structure("B_NAE"), 0)


def test_canonical_relation():
    s = Structure.build(2, R=[(0,)], S=[(1, 0), (1, 1)])
    assert canonical_relation(s) == {(0, 1, 0), (0, 1, 1)}


@pytest.mark.parametrize("arities", [(1,), (2,), (3,), (1, 1), (1, 2), (2, 2)])
def test_per_relation_matches_canonical_on_normalized(arities):
    for b in all_boolean_structures(arities, normalized_only=True):
        for lo, hi in ((0, 1), (1, 0)):
            assert (dominates_boolean(b, lo, hi) is None) == dominates_via_canonical(b, lo, hi)


def test_per_relation_can_differ_without_normalization():
    # an empty relation makes the product empty, so domination holds vacuously there
    s = Structure(Signature((("R1", 1), ("R2", 1))), 2, (frozenset(), frozenset({(0,)})))
    assert dominates_via_canonical(s, 0, 1)
    assert domination_violation(s, 0, 1) is not None


def test_enumeration_counts():
    assert sum(1 for _ in all_boolean_structures((2,))) == 16
    assert sum(1 for _ in all_boolean_structures((2,), normalized_only=True)) == 14
    assert sum(1 for _ in all_boolean_structures((1, 1), normalized_only=True)) == 4


def test_domination_pins_quantifiers():
    # semantic oracle: when hi dominates lo, universals may take lo and existentials hi
    for b in (B1, Structure.build(2, R=[(1, 1), (0, 1)])):
        for lo, hi in ((0, 1), (1, 0)):
            if dominates_boolean(b, lo, hi) is not None:
                continue
            for phi in enumerate_sentences(b.sig, 3, 2):
                f = phi.to_formula()
                assert evaluate(b, f) == evaluate(b, instantiate(f, lo, hi))
