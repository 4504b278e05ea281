import random

import pytest

from posmc.logic import DIGRAPH, Not, Signature, free_variables, parse_formula, subformulas
from posmc.suites import enumerate_sentences, random_prenex, var_names


def test_single_quantifier_single_atom():
    got = {p.to_formula() for p in enumerate_sentences(DIGRAPH, 1, 1)}
    assert got == {parse_formula("exists x. E(x,x)"), parse_formula("forall x. E(x,x)")}


@pytest.mark.parametrize("q, a, negation", [(2, 2, False), (2, 3, False), (3, 2, True)])
def test_duplicate_free(q, a, negation):
    seen = set()
    for p in enumerate_sentences(DIGRAPH, q, a, negation=negation):
        f = p.to_formula()
        assert f not in seen
        seen.add(f)
        assert not free_variables(f)
    assert seen


def test_negation_flag():
    plain = list(enumerate_sentences(DIGRAPH, 2, 2))
    assert not any(isinstance(g, Not) for p in plain for g in subformulas(p.to_formula()))
    neg = list(enumerate_sentences(DIGRAPH, 2, 2, negation=True))
    assert any(isinstance(g, Not) for p in neg for g in subformulas(p.to_formula()))


def test_seeded_random_is_deterministic():
    a = list(enumerate_sentences(DIGRAPH, 5, 5, mode="seeded-random", seed=11, count=50))
    b = list(enumerate_sentences(DIGRAPH, 5, 5, mode="seeded-random", seed=11, count=50))
    c = list(enumerate_sentences(DIGRAPH, 5, 5, mode="seeded-random", seed=12, count=50))
    assert a == b and a != c and len(a) == 50


def test_random_prenex_bounds():
    rng = random.Random(0)
    sig = Signature.of(R=3, U=1)
    for _ in range(200):
        p = random_prenex(sig, rng, 4, 3)
        assert 1 <= len(p.prefix) <= 4
        assert not free_variables(p.to_formula())


def test_bad_arguments():
    with pytest.raises(ValueError):
        list(enumerate_sentences(DIGRAPH, 0, 1))
    with pytest.raises(ValueError):
        list(enumerate_sentences(DIGRAPH, 1, 1, mode="bogus"))


def test_var_names_distinct():
    names = var_names(8)
    assert len(set(names)) == 8
