import pytest

from posmc import catalog
from posmc.boolean import BooleanError
from posmc.evaluator import evaluate
from posmc.logic import DIGRAPH, Signature, parse_formula
from posmc.reductions import (
    CORRECTED,
    NAE_SIG,
    PRINTED,
    ReductionError,
    RewriteRule,
    boolean_case,
    boolean_gadget_result,
    build_boolean_gadget,
    check_gadget,
    gadget,
    gadget_catalog,
    interpret_gadget,
    parse_gadget,
    reduce_sentence,
    tranclos_body,
)
from posmc.structures import Digraph, Structure, closure, is_isomorphic
from posmc.suites import enumerate_sentences

P = lambda text, sig=DIGRAPH: parse_formula(text, sig)  # noqa: E731


def test_rule_parsing():
    assert RewriteRule.parse("tranclos:3") == RewriteRule("tranclos", n=3)
    assert RewriteRule.parse("tranclos(4)") == RewriteRule("tranclos", n=4)
    assert RewriteRule.parse("gadget:H8bar-defines-K1K2").gadget_name == "H8bar-defines-K1K2"
    assert str(RewriteRule.parse("dual")) == "dual"
    for bad in ("frob", "tranclos", "tranclos:x", "dual:1"):
        with pytest.raises(ReductionError):
            RewriteRule.parse(bad)


def test_dual_rewrite():
    out = reduce_sentence("dual", P("forall x. exists y. E(x,y) & E(y,x)"))
    assert out == P("exists x. forall y. E(x,y) | E(y,x)")


def test_symclos_and_doub_rewrites():
    assert reduce_sentence("symclos", P("exists x. exists y. E(x,y)")) == P("exists x. exists y. E(x,y) | E(y,x)")
    assert reduce_sentence("doub", P("exists x. exists y. E(x,y)")) == P("exists x. exists y. E(x,y) & E(y,x)")


def test_tranclos_body_shape():
    assert tranclos_body(3) == P("exists w. E(u,v) | (E(u,w) & E(w,v))")
    assert tranclos_body(2) == P("E(u,v)")
    f = tranclos_body(5)
    assert f == P("exists w1. exists w2. exists w3. E(u,v) | (E(u,w1) & E(w1,v)) | (E(u,w1) & E(w1,w2) & E(w2,v))"
                  " | (E(u,w1) & E(w1,w2) & E(w2,w3) & E(w3,v))")


def test_tranclos_rewrite_on_atom():
    out = reduce_sentence("tranclos:3", P("exists x. exists y. E(x,y)"))
    assert out == P("exists x. exists y. exists w. E(x,y) | (E(x,w) & E(w,y))")


def test_tranclos_printed_form_misses_loops():
    cycle = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    phi = P("exists x. E(x,x)")
    assert evaluate(closure(cycle, "tran"), phi)
    assert not evaluate(cycle, reduce_sentence("tranclos:3", phi))
    assert evaluate(cycle, reduce_sentence("tranclos:4", phi))


def test_nae_rewrite():
    phi = P("forall v. exists v'. exists v''. NAE(v,v',v'')", NAE_SIG)
    assert reduce_sentence("nae_to_k2", phi) == P("forall v. exists v'. exists v''. E(v,v') | E(v',v'') | E(v,v'')")


def test_rewrite_signature_guard():
    with pytest.raises(ReductionError):
        reduce_sentence("nae_to_k2", P("exists x. E(x,x)"))


@pytest.mark.parametrize("kind", ["sym", "doub"])
def test_closure_contract_on_dp010(kind):
    h = catalog.digraph("DP010_3")
    rule = "symclos" if kind == "sym" else "doub"
    for phi in enumerate_sentences(DIGRAPH, 2, 3):
        assert evaluate(closure(h, kind), phi) == evaluate(h, reduce_sentence(rule, phi))


def test_identity_gadget():
    h = catalog.digraph("DP010_3")
    assert interpret_gadget(h, gadget("identity")) == h
    phi = P("forall x. exists y. E(x,y) | E(y,y)")
    assert reduce_sentence(RewriteRule("gadget", gadget_name="identity"), phi) == phi


def test_h8bar_gadget():
    c = check_gadget(gadget("H8bar-defines-K1K2"))
    assert c.ok and gadget("H8bar-defines-K1K2").provenance == PRINTED
    assert is_isomorphic(c.result.as_digraph(), catalog.digraph("K1+K2"))


def test_dp010bar_printed_and_corrected():
    printed = check_gadget(gadget("DP010bar-defines-K1K2"))
    assert printed.result.as_digraph().edges == {(0, 0), (2, 0)}
    assert printed.ok is False
    fixed = gadget("DP010bar-defines-K1K2-corrected")
    assert fixed.provenance == CORRECTED and fixed.corrects == "DP010bar-defines-K1K2"
    assert check_gadget(fixed).ok


def test_h6bar_gadget():
    c = check_gadget(gadget("H6bar-defines-DP100bar"))
    assert c.ok
    assert is_isomorphic(c.result.as_digraph(), catalog.digraph("~DP100_3"))


def test_dp110_gadget_defines_h5():
    c = check_gadget(gadget("DP110-defines-H5"))
    assert c.result.as_digraph().edges == {(0, 0), (1, 1), (0, 1), (1, 2), (2, 1)}
    x = c.result.as_digraph()
    assert is_isomorphic(closure(closure(x, "tran"), "doub"), catalog.digraph("K1_1+K11_2"))


def test_dp011_gadget_yields_dp110():
    c = check_gadget(gadget("DP011-defines-H5prime"))
    assert is_isomorphic(c.result.as_digraph(), catalog.digraph("DP110_3"))


def test_all_catalog_gadgets_checked():
    for g in gadget_catalog():
        if g.host is None or g.expected_result is None:
            continue
        c = check_gadget(g)
        assert c.ok == (g.name != "DP010bar-defines-K1K2"), g.name


def test_gadget_validation():
    with pytest.raises(ReductionError):
        parse_gadget("host -\nvars u v\nE(u,w)")
    with pytest.raises(Exception):
        parse_gadget("host -\nvars u v\n~E(u,v)")
    with pytest.raises(ReductionError):
        parse_gadget("vars u v\nE(u,v)")
    g = parse_gadget("host ~H8\nvars u v\nE(v,u)  # converse")
    assert g.host == "~H8"
    assert parse_gadget(g.to_text()).body == g.body


def test_gadget_signature_mismatch():
    with pytest.raises(ReductionError):
        interpret_gadget(catalog.structure("B1"), gadget("identity"))


def test_boolean_cases():
    assert boolean_case(catalog.structure("B_NAE")) == "neither-constant"
    assert boolean_case(catalog.structure("B2")) == "zeros-only"
    assert boolean_case(Structure.build(2, R=[(0, 0), (1, 1)])) == "both-constant"
    assert boolean_case(Structure.build(2, R=[(1, 1, 1), (1, 0, 0)])) == "ones-only"


def test_boolean_gadget_nae():
    b = catalog.structure("B_NAE")
    g, ctx = build_boolean_gadget(b, "neither-constant")
    assert boolean_gadget_result(b, g) == catalog.digraph("K2")
    assert ctx.case == "neither-constant"


def test_boolean_gadget_both_constant():
    b = Structure(Signature((("R", 2),)), 2, (frozenset({(0, 0), (1, 1)}),))
    g, _ = build_boolean_gadget(b, "both-constant")
    assert boolean_gadget_result(b, g) == catalog.digraph("K2bar")


def test_boolean_gadget_b2():
    b = catalog.structure("B2")
    g, ctx = build_boolean_gadget(b, "zeros-only")
    assert boolean_gadget_result(b, g) == catalog.digraph("K2bar")
    # the construction needs a tuple where lowering its 1s to 0 leaves the relation
    assert ctx.violation.tuple == (0, 1, 1) and ctx.violation.positions == (1,)
    assert ctx.violation.flipped == (0, 0, 1)


def test_boolean_gadget_premises():
    with pytest.raises(BooleanError, match="premise"):
        build_boolean_gadget(catalog.structure("B2"), "neither-constant")
    with pytest.raises(BooleanError, match="premise"):
        build_boolean_gadget(catalog.structure("B1"), "zeros-only")
