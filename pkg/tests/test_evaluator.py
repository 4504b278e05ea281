import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posmc import catalog
from posmc.evaluator import (
    EvaluationError,
    StructureBatch,
    agree_on_suite,
    evaluate,
    evaluate_ground,
    evaluate_naive,
    evaluate_with,
    memo_entries,
)
from posmc.logic import DIGRAPH, FULL, TRUE, Atom, Const, Signature, parse_formula, substitute_atom, to_prenex
from posmc.structures import Digraph, all_digraphs
from posmc.suites import enumerate_sentences, random_sentence

K2 = catalog.digraph("K2")
K2BAR = catalog.digraph("K2bar")
P = lambda text: parse_formula(text)  # noqa: E731


def test_basic_examples():
    assert evaluate(K2, P("forall x. exists y. E(x,y)"))
    assert not evaluate(K2, P("exists x. E(x,x)"))
    assert evaluate(K2BAR, P("exists x. E(x,x)"))
    assert evaluate(K2, to_prenex(P("forall x. exists y. E(x,y)")))


def test_ground_examples():
    b1 = catalog.structure("B1")
    r = parse_formula("R(x,y,z)", b1.sig)
    assert evaluate_ground(b1, r, {"x": 0, "y": 0, "z": 1})
    assert not evaluate_ground(b1, r, {"x": 1, "y": 1, "z": 1})
    assert evaluate_ground(b1, TRUE, {})
    assert evaluate_ground(b1, Atom("R", (Const(0), Const(0), Const(0))))
    with pytest.raises(EvaluationError):
        evaluate_ground(b1, r, {"x": 0})
    with pytest.raises(EvaluationError):
        evaluate_ground(b1, parse_formula("exists x. R(x,x,x)", b1.sig))


def test_free_variables_rejected():
    with pytest.raises(EvaluationError):
        evaluate(K2, P("E(x,y)"))
    assert evaluate_with(K2, P("E(x,y)"), {"x": 0, "y": 1})
    with pytest.raises(EvaluationError):
        evaluate_with(K2, P("E(x,y)"), {"x": 0})


def test_signature_mismatch():
    with pytest.raises(Exception):
        evaluate(catalog.structure("B1"), P("exists x. E(x,x)"))


def test_empty_universe():
    empty = Digraph.from_edges(0, [])
    assert evaluate(empty, P("forall x. E(x,x)"))
    assert not evaluate(empty, P("exists x. true"))


def test_nae_vs_k2():
    nae = catalog.structure("B_NAE")
    body = P("E(a,b) | E(b,c) | E(a,c)")
    for phi in enumerate_sentences(nae.sig, 3, 2):
        f = phi.to_formula()
        assert evaluate(nae, f) == evaluate(K2, substitute_atom(f, "NAE", ("a", "b", "c"), body))


def test_memo_matches_naive_on_exhaustive_suite():
    graphs = list(all_digraphs(2)) + list(all_digraphs(3))[::11]
    for phi in enumerate_sentences(DIGRAPH, 2, 2):
        for h in graphs:
            assert evaluate(h, phi) == evaluate_naive(h, phi)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_memo_matches_naive_nested(seed):
    rng = random.Random(seed)
    f = random_sentence(DIGRAPH, rng, depth=5, negation=True)
    h = list(all_digraphs(3))[rng.randrange(512)]
    assert evaluate(h, f) == evaluate_naive(h, f)


def test_batch_matches_memo():
    graphs = list(all_digraphs(3))
    batch = StructureBatch(graphs)
    for phi in enumerate_sentences(DIGRAPH, 3, 2, mode="seeded-random", seed=5, count=60, negation=True):
        vec = batch.evaluate(phi)
        assert vec.shape == (512,)
        assert list(vec) == [evaluate(h, phi) for h in graphs]
    sub = batch.subset(np.arange(512) % 2 == 0)
    assert len(sub) == 256
    phi = P("forall x. exists y. E(x,y)")
    assert list(sub.evaluate(phi)) == [evaluate(h, phi) for h in graphs[::2]]


def test_batch_rejects_mixed():
    with pytest.raises(ValueError):
        StructureBatch([K2, catalog.digraph("K3")])
    with pytest.raises(ValueError):
        StructureBatch([])


def _nested_chain(k):
    text = f"E(x{k},x{k})"
    for i in reversed(range(1, k + 1)):
        q = "forall" if i % 2 else "exists"
        text = f"{q} x{i}. (E(x{i - 1},x{i}) | {text})"
    return P(f"exists x0. {text}")


def test_memo_is_small_on_nested_chain():
    h = catalog.digraph("DP010_3")
    small = _nested_chain(5)
    assert evaluate(h, small) == evaluate_naive(h, small)
    # each level is keyed on one bound variable, so entries grow linearly
    assert memo_entries(h, _nested_chain(12)) <= 13 * 3 * 3


def test_agree_on_suite():
    suite = list(enumerate_sentences(DIGRAPH, 2, 2, negation=True))
    assert agree_on_suite(catalog.digraph("P000_3"), K2, suite) is None
    assert agree_on_suite(K2, K2BAR, suite) is not None
    loops = P("exists x. E(x,x)")
    assert agree_on_suite(K2, K2BAR, [loops]) == loops


def test_agree_with_dual_convention():
    from posmc.logic import dualize
    from posmc.structures import complement

    suite = list(enumerate_sentences(DIGRAPH, 2, 2))
    for h in list(all_digraphs(3))[::17]:
        assert agree_on_suite(h, complement(h), suite, translate=dualize, expect_equal=False) is None
