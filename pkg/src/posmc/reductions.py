"""Sentence rewrites, definability gadgets and the boolean gadget constructors.

A gadget is a positive formula with designated free variables.  Interpreting
it over a host structure defines a new relation; substituting it for every
atom of that relation turns a sentence about the defined structure into one
about the host.  :func:`reduce_sentence` applies the closure, duality and
NAE rewrites, and any named gadget, in this way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .boolean import BooleanError, contains_constant, domination_violation, is_normalized, require_boolean
from .logic import (
    DIGRAPH,
    Atom,
    Const,
    Exists,
    Formula,
    Not,
    PrenexSentence,
    SemanticError,
    Signature,
    as_formula,
    atom,
    conjoin,
    disjoin,
    dualize,
    free_variables,
    parse_formula,
    relations_used,
    render_formula,
    subformulas,
    substitute,
    substitute_atom,
)
from .structures import Digraph, Structure, is_isomorphic

PRINTED = "PRINTED"
CORRECTED = "CORRECTED"
DERIVED = "DERIVED"

NAE_SIG = Signature((("NAE", 3),))


class ReductionError(SemanticError):
    pass


@dataclass(frozen=True)
class GadgetDefinition:
    name: str
    sig: Signature
    free_vars: tuple[str, ...]
    body: Formula
    target: str = "E"
    host: Optional[str] = None
    expected_result: Optional[str] = None
    provenance: str = DERIVED
    corrects: Optional[str] = None
    note: str = ""

    def __post_init__(self):
        if any(isinstance(g, Not) for g in subformulas(self.body)):
            raise ReductionError(f"gadget {self.name}: body must be positive")
        fv = free_variables(self.body)
        if fv != set(self.free_vars) or len(set(self.free_vars)) != len(self.free_vars):
            raise ReductionError(f"gadget {self.name}: free variables {sorted(fv)} differ from {list(self.free_vars)}")
        for rel, arity in relations_used(self.body).items():
            if rel not in self.sig or self.sig.arity(rel) != arity:
                raise ReductionError(f"gadget {self.name}: {rel}/{arity} is not in the host signature {self.sig}")

    @property
    def arity(self) -> int:
        return len(self.free_vars)

    @property
    def target_signature(self) -> Signature:
        return Signature(((self.target, self.arity),))

    def to_text(self) -> str:
        """Gadget file: host line, variable line, formula."""
        lines = [f"host {self.host or '-'}", "vars " + " ".join(self.free_vars), render_formula(self.body)]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "host": self.host,
            "vars": list(self.free_vars),
            "target": self.target,
            "body": render_formula(self.body),
            "expected": self.expected_result,
            "provenance": self.provenance,
            "corrects": self.corrects,
        }


def parse_gadget(text: str, name: str = "file", sig: Signature = DIGRAPH) -> GadgetDefinition:
    """Read the gadget file format; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 3 or not lines[0].startswith("host") or not lines[1].startswith("vars"):
        raise ReductionError("gadget file needs a 'host' line, a 'vars' line and a formula")
    host = lines[0].split(None, 1)[1].strip() if len(lines[0].split()) > 1 else None
    params = tuple(lines[1].split()[1:])
    body = parse_formula("\n".join(lines[2:]), sig)
    return GadgetDefinition(name, sig, params, body, host=None if host == "-" else host)


def _gadget(name, body, host, expected, provenance, free_vars=("u", "v"), sig=DIGRAPH, target="E", corrects=None, note=""):
    return GadgetDefinition(name, sig, free_vars, parse_formula(body, sig), target, host, expected, provenance, corrects, note)


_LINE_UW_WV = "(forall w. E(w,w) | (E(u,w) & E(w,v)))"

GADGETS: tuple[GadgetDefinition, ...] = (
    _gadget("identity", "E(u,v)", None, None, DERIVED),
    _gadget("symclos", "E(u,v) | E(v,u)", None, None, DERIVED),
    _gadget("doub", "E(u,v) & E(v,u)", None, None, DERIVED),
    _gadget(
        "K2-defines-NAE",
        "E(v,v') | E(v',v'') | E(v,v'')",
        "K2",
        "B_NAE",
        PRINTED,
        free_vars=("v", "v'", "v''"),
        target="NAE",
    ),
    _gadget(
        "DP010bar-defines-K1K2",
        _LINE_UW_WV + " | (forall w. E(w,w) | (E(w,u) & E(w,v)))",
        "~DP010_3",
        "K1+K2",
        PRINTED,
        note="as displayed; defines {(a,a),(c,a)}",
    ),
    _gadget(
        "DP010bar-defines-K1K2-corrected",
        _LINE_UW_WV + " | (forall w. E(w,w) | (E(w,u) & E(v,w)))",
        "~DP010_3",
        "K1+K2",
        CORRECTED,
        corrects="DP010bar-defines-K1K2",
        note="second line emended to E(w,u) & E(v,w)",
    ),
    _gadget(
        "DP110-defines-H5",
        "E(u,v) | (forall w. E(w,w) | (E(v,w) & (exists w'. E(w',w) & E(w',u))))",
        "DP110_3",
        "H5",
        PRINTED,
    ),
    _gadget(
        "DP011-defines-H5prime",
        "E(v,u) | (forall w. E(w,w) | (E(w,u) & (exists w'. E(w,w') & E(v,w'))))",
        "DP011_3",
        "DP110_3",
        PRINTED,
        note="defines a copy of DP110_3, not the H5' shape",
    ),
    _gadget(
        "H6bar-defines-DP100bar",
        "E(u,v) | (forall w. E(w,w) | ((exists w'. E(w,w') & E(w',u)) & (exists w''. E(w'',w) & E(w'',v))))",
        "~H6",
        "~DP100_3",
        PRINTED,
    ),
    _gadget(
        "H8bar-defines-K1K2",
        _LINE_UW_WV + " | (forall w. E(w,w) | (E(w,u) & E(v,w)))",
        "~H8",
        "K1+K2",
        PRINTED,
    ),
)


def gadget_catalog() -> list[GadgetDefinition]:
    return list(GADGETS)


def gadget(name: str) -> GadgetDefinition:
    for g in GADGETS:
        if g.name == name:
            return g
    raise ReductionError(f"unknown gadget {name!r}")


# ---------------------------------------------------------------------------
# interpretation


def interpret_gadget(host: Structure, g: GadgetDefinition) -> Structure:
    """The relation ``g`` defines over ``host`` (a Digraph for binary ``E`` targets)."""
    from .evaluator import evaluate_with

    if host.sig != g.sig:
        raise ReductionError(f"gadget {g.name} needs signature {g.sig}, host has {host.sig}")
    tuples = frozenset(
        t for t in itertools.product(range(host.size), repeat=g.arity) if evaluate_with(host, g.body, dict(zip(g.free_vars, t)))
    )
    if g.target == "E" and g.arity == 2:
        return Digraph(DIGRAPH, host.size, (tuples,))
    return Structure(g.target_signature, host.size, (tuples,))


@dataclass(frozen=True)
class GadgetCheck:
    gadget: str
    host: str
    result: Structure
    expected: Optional[str]
    ok: Optional[bool]


def check_gadget(g: GadgetDefinition, host: Optional[Structure] = None) -> GadgetCheck:
    """Interpret ``g`` on its catalog host and compare with the expected entry."""
    from . import catalog

    if host is None:
        if g.host is None:
            raise ReductionError(f"gadget {g.name} has no host")
        host = catalog.structure(g.host)
    result = interpret_gadget(host, g)
    ok = None
    if g.expected_result is not None:
        want = catalog.structure(g.expected_result)
        if want.sig.relations == (("E", 2),) and result.sig.relations == (("E", 2),):
            ok = is_isomorphic(result.as_digraph(), want.as_digraph())
        else:
            ok = want.size == result.size and want.tables == result.tables
    return GadgetCheck(g.name, g.host or "-", result, g.expected_result, ok)


# ---------------------------------------------------------------------------
# sentence rewrites


@dataclass(frozen=True)
class RewriteRule:
    kind: str
    n: Optional[int] = None
    gadget_name: Optional[str] = None

    KINDS = ("dual", "symclos", "doub", "tranclos", "nae_to_k2", "gadget")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ReductionError(f"unknown rule {self.kind!r}")
        if self.kind == "tranclos" and self.n is None:
            raise ReductionError("tranclos needs the host size n")
        if self.kind == "gadget" and self.gadget_name is None:
            raise ReductionError("gadget rule needs a gadget name")

    @classmethod
    def parse(cls, text: str) -> "RewriteRule":
        """``dual``, ``symclos``, ``tranclos:3`` or ``tranclos(3)``, ``gadget:<name>`` ..."""
        text = text.strip()
        for sep in (":", "("):
            if sep in text:
                kind, arg = text.split(sep, 1)
                arg = arg.rstrip(")")
                if kind == "tranclos":
                    try:
                        return cls("tranclos", n=int(arg))
                    except ValueError:
                        raise ReductionError(f"bad tranclos size {arg!r}") from None
                if kind == "gadget":
                    return cls("gadget", gadget_name=arg)
                raise ReductionError(f"rule {kind!r} takes no parameter")
        return cls(text)

    def __str__(self):
        if self.kind == "tranclos":
            return f"tranclos({self.n})"
        if self.kind == "gadget":
            return f"gadget({self.gadget_name})"
        return self.kind

    def input_signature(self) -> Signature:
        if self.kind == "nae_to_k2":
            return NAE_SIG
        if self.kind == "gadget":
            return gadget(self.gadget_name).target_signature
        return DIGRAPH


def tranclos_body(n: int) -> Formula:
    """``E(u,v)`` or a path of length at most ``n-1`` from ``u`` to ``v``.

    This is the expansion as printed, with ``n-2`` auxiliary variables.  On an
    ``n``-element host it captures every non-loop edge of the transitive
    closure, but a loop may need a closed walk of length ``n``; use
    ``tranclos_body(n + 1)`` when the rewrite must be exact.
    """
    if n < 3:
        return atom("E", "u", "v")
    ws = ["w"] if n == 3 else [f"w{i}" for i in range(1, n - 1)]
    paths = [atom("E", "u", "v")]
    for k in range(1, n - 1):
        nodes = ["u"] + ws[:k] + ["v"]
        paths.append(conjoin(atom("E", a, b) for a, b in zip(nodes, nodes[1:])))
    f = disjoin(paths)
    for w in reversed(ws):
        f = Exists(w, f)
    return f


def rule_gadget(rule: RewriteRule) -> Optional[GadgetDefinition]:
    """The atom substitution behind ``rule`` (``None`` for dual)."""
    if rule.kind == "dual":
        return None
    if rule.kind in ("symclos", "doub"):
        return gadget(rule.kind)
    if rule.kind == "tranclos":
        return GadgetDefinition(f"tranclos({rule.n})", DIGRAPH, ("u", "v"), tranclos_body(rule.n))
    if rule.kind == "nae_to_k2":
        return gadget("K2-defines-NAE")
    return gadget(rule.gadget_name)


def reduce_sentence(rule: Union[RewriteRule, str], f: Union[Formula, PrenexSentence]) -> Formula:
    if isinstance(rule, str):
        rule = RewriteRule.parse(rule)
    f = as_formula(f)
    sig = rule.input_signature()
    for rel, arity in relations_used(f).items():
        if rel not in sig or sig.arity(rel) != arity:
            raise ReductionError(f"rule {rule} works on signature {sig}, sentence uses {rel}/{arity}")
    if rule.kind == "dual":
        return dualize(f)
    g = rule_gadget(rule)
    return substitute_atom(f, g.target, g.free_vars, g.body)


# ---------------------------------------------------------------------------
# boolean gadgets

BOOLEAN_CASES = ("neither-constant", "both-constant", "ones-only", "zeros-only")

Position = tuple[str, int]


@dataclass(frozen=True)
class BooleanGadgetContext:
    """Witness tuple per relation and the blocks of positions sent to each variable."""

    case: str
    witness: tuple[tuple[int, ...], ...]
    blocks: dict = field(hash=False)
    violation: Optional[object] = None

    def to_dict(self) -> dict:
        out = {
            "case": self.case,
            "witness": [list(t) for t in self.witness],
            "blocks": {k: [f"{r}[{p}]" for r, p in v] for k, v in self.blocks.items()},
        }
        if self.violation is not None:
            out["violation"] = self.violation.to_dict()
        return out


def boolean_case(b: Structure) -> str:
    """Which constructor applies, by membership of the constant tuples."""
    zero, one = contains_constant(b, 0), contains_constant(b, 1)
    if not zero and not one:
        return "neither-constant"
    if zero and one:
        return "both-constant"
    return "ones-only" if one else "zeros-only"


def _identify(name: str, pattern: tuple[int, ...], names: dict[int, str]) -> Atom:
    return Atom(name, tuple(names[x] for x in pattern))


def build_boolean_gadget(b: Structure, case: str) -> tuple[GadgetDefinition, BooleanGadgetContext]:
    """Positive definition of ``K2`` or its complement over a normalized boolean ``b``."""
    require_boolean(b)
    if not is_normalized(b):
        raise BooleanError("premise failed: structure has an empty or full relation")
    if not b.sig.relations:
        raise BooleanError("premise failed: no relation left")
    if case not in BOOLEAN_CASES:
        raise BooleanError(f"unknown case {case!r}")
    actual = boolean_case(b)
    if actual != case:
        raise BooleanError(f"premise failed: constant tuples give case {actual}, not {case}")
    items = list(b.relation_items())

    if case == "neither-constant":
        witness = tuple(min(t) for _, _, t in items)
        names = {0: "u", 1: "v"}
        r1 = conjoin(_identify(n, w, names) for (n, _, _), w in zip(items, witness))
        r2 = substitute(r1, {"u": "v", "v": "u"})
        body = disjoin([r1, r2])
        blocks = _blocks(items, witness, {0: "I", 1: "J"})
        return GadgetDefinition(f"bool-{case}", b.sig, ("u", "v"), body, host=None, expected_result="K2"), BooleanGadgetContext(case, witness, blocks)

    if case == "both-constant":
        k = next(i for i, (_, a, t) in enumerate(items) if len(t) < 2**a)
        name, arity, table = items[k]
        missing = min(t for t in itertools.product((0, 1), repeat=arity) if t not in table)
        witness = tuple(missing if i == k else (0,) * a for i, (_, a, _) in enumerate(items))
        names = {0: "u", 1: "v"}
        r1 = conjoin(_identify(n, w, names) for (n, _, _), w in zip(items, witness))
        r2 = substitute(r1, {"u": "v", "v": "u"})
        body = conjoin([r1, r2])
        blocks = _blocks(items, witness, {0: "I", 1: "J"})
        return GadgetDefinition(f"bool-{case}", b.sig, ("u", "v"), body, expected_result="K2bar"), BooleanGadgetContext(case, witness, blocks)

    c = 1 if case == "ones-only" else 0
    d = 1 - c
    viol = domination_violation(b, d, c)
    if viol is None:
        raise BooleanError(f"premise failed: {c} dominates {d}, so a canon exists")
    k = next(i for i, (n, _, _) in enumerate(items) if n == viol.relation)
    # positions of the violating tuple: flipped -> u, other d-valued -> v, c-valued -> z
    labels = []
    for p, x in enumerate(viol.tuple):
        labels.append("u" if p in viol.positions else ("v" if x == d else "z"))
    parts = []
    for i, (n, a, _) in enumerate(items):
        parts.append(Atom(n, tuple(labels)) if i == k else Atom(n, ("z",) * a))
    r_prime = conjoin(parts)
    r_b = conjoin(Atom(n, ("z",) * a) for n, a, _ in items)
    r2 = Exists("z", conjoin([r_b, r_prime]))
    body = conjoin([r2, substitute(r2, {"u": "v", "v": "u"})])
    witness = tuple(viol.tuple if i == k else (c,) * a for i, (_, a, _) in enumerate(items))
    blocks: dict[str, tuple[Position, ...]] = {"I": (), f"J{d}": (), f"J{c}": ()}
    for i, (n, a, _) in enumerate(items):
        for p in range(a):
            key = f"J{c}" if i != k or labels[p] == "z" else ("I" if labels[p] == "u" else f"J{d}")
            blocks[key] += ((n, p),)
    ctx = BooleanGadgetContext(case, witness, blocks, viol)
    return GadgetDefinition(f"bool-{case}", b.sig, ("u", "v"), body, expected_result="K2bar"), ctx


def _blocks(items, witness, label: dict[int, str]) -> dict[str, tuple[Position, ...]]:
    out: dict[str, tuple[Position, ...]] = {v: () for v in label.values()}
    for (n, _, _), w in zip(items, witness):
        for p, x in enumerate(w):
            out[label[x]] += ((n, p),)
    return out


def boolean_gadget_result(b: Structure, g: GadgetDefinition) -> Digraph:
    return interpret_gadget(b, g).as_digraph()


def const_free(f: Formula) -> bool:
    return not any(isinstance(g, Atom) and any(isinstance(a, Const) for a in g.args) for g in subformulas(f))
