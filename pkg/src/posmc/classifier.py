"""Complexity classification of model checking for fixed small structures.

Boolean structures get the Logspace / PSPACE-complete dichotomy; digraphs of
size at most three get the four-way split.  :func:`classify_digraph` follows
a case analysis on the shape of the digraph and produces a
:class:`Certificate` for every verdict; :func:`classify_digraph_semantic`
decides from canons and good pairs alone and serves as an independent check.

Hardness certificates are reduction chains: a list of steps (complement,
closure, gadget, twin contraction) that carries the digraph to one of the
known hard base cases.  Each complement step swaps NP and coNP.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .boolean import (
    BooleanDominationWitness,
    BooleanError,
    dominates_boolean,
    normalize,
    require_boolean,
)
from .canons import exists_canons, forall_canons, good_pairs, is_exists_canon, is_forall_canon, is_good_pair
from .logic import SemanticError, render_formula
from .reductions import GadgetDefinition, boolean_case, build_boolean_gadget, gadget, interpret_gadget
from .structures import (
    Digraph,
    Structure,
    all_digraphs,
    canonical_code,
    closure,
    complement,
    components,
    contract_twin,
    edge_code,
    find_twins,
    is_connected,
    is_isomorphic,
    is_twin_pair,
    isolated_vertices,
)

__all__ = [
    "BooleanDominationWitness",
    "dominates_boolean",
    "ComplexityClass",
    "ChainStep",
    "Certificate",
    "classify_boolean",
    "classify_digraph",
    "classify_digraph_semantic",
    "check_certificate",
    "classification_table",
]


class ClassifierError(SemanticError):
    pass


class CrossCheckError(AssertionError):
    def __init__(self, message: str, digraph: Optional[Digraph] = None):
        super().__init__(message)
        self.digraph = digraph


class ComplexityClass(enum.Enum):
    LOGSPACE = "Logspace"
    NP_COMPLETE = "NP-complete"
    CONP_COMPLETE = "coNP-complete"
    PSPACE_COMPLETE = "PSPACE-complete"

    def dual(self) -> "ComplexityClass":
        return _DUAL.get(self, self)

    @property
    def display(self) -> str:
        return self.value

    def __str__(self):
        return self.value


_DUAL = {
    ComplexityClass.NP_COMPLETE: ComplexityClass.CONP_COMPLETE,
    ComplexityClass.CONP_COMPLETE: ComplexityClass.NP_COMPLETE,
}

LOGSPACE = ComplexityClass.LOGSPACE
NP = ComplexityClass.NP_COMPLETE
CONP = ComplexityClass.CONP_COMPLETE
PSPACE = ComplexityClass.PSPACE_COMPLETE

# digraphs whose model checking problem is known hard without further reduction
BASES: dict[str, ComplexityClass] = {
    "K2": PSPACE,
    "K2bar": PSPACE,
    "K3": PSPACE,
    "K3bar": PSPACE,
    "P000_3": PSPACE,
    "K1_1+K11_2": PSPACE,
    "K1+K2": NP,
}


def _catalog_digraph(name: str) -> Digraph:
    from .catalog import digraph

    return digraph(name)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ChainStep:
    """One link of a reduction chain.

    ``op`` is ``complement``, ``symclos``, ``tranclos``, ``doub``, ``gadget``
    or ``twin``; ``arg`` names the gadget; ``expect`` optionally names the
    catalog digraph the step must produce (up to isomorphism).
    """

    op: str
    arg: Optional[str] = None
    expect: Optional[str] = None

    def apply(self, h: Digraph) -> Digraph:
        if self.op == "complement":
            return complement(h)
        if self.op in ("symclos", "tranclos", "doub"):
            return closure(h, {"symclos": "sym", "tranclos": "tran", "doub": "doub"}[self.op])
        if self.op == "gadget":
            return interpret_gadget(h, gadget(self.arg)).as_digraph()
        if self.op == "twin":
            x, y = find_twins(h)[0]
            return contract_twin(h, x, y)
        raise ClassifierError(f"unknown chain step {self.op!r}")

    def __str__(self):
        s = self.op if self.arg is None else f"{self.op}[{self.arg}]"
        return f"{s} -> {self.expect}" if self.expect else s

    def to_dict(self) -> dict:
        return {"op": self.op, "arg": self.arg, "expect": self.expect}


def _jsonable(v: Any) -> Any:
    if hasattr(v, "to_dict"):
        return v.to_dict()
    if isinstance(v, (frozenset, set)):
        return sorted(_jsonable(x) for x in v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass(frozen=True)
class Certificate:
    verdict: ComplexityClass
    rule: str
    witnesses: dict = field(default_factory=dict, hash=False)
    chain: tuple[ChainStep, ...] = ()
    base: Optional[str] = None
    inner: Optional["Certificate"] = None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict.value, "rule": self.rule}
        if self.witnesses:
            out["witnesses"] = _jsonable(self.witnesses)
        if self.chain:
            out["chain"] = [s.to_dict() for s in self.chain]
        if self.base:
            out["base"] = self.base
        if self.notes:
            out["notes"] = list(self.notes)
        if self.inner is not None:
            out["inner"] = self.inner.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self, indent: str = "") -> str:
        lines = [f"{indent}verdict: {self.verdict.value}", f"{indent}rule: {self.rule}"]
        for k, v in self.witnesses.items():
            if isinstance(v, GadgetDefinition):
                v = render_formula(v.body)
            else:
                v = json.dumps(_jsonable(v), sort_keys=True)
            lines.append(f"{indent}witness {k}: {v}")
        if self.chain:
            lines.append(f"{indent}chain: " + " ; ".join(str(s) for s in self.chain))
        if self.base:
            lines.append(f"{indent}base: {self.base} ({BASES[self.base].value})")
        for n in self.notes:
            lines.append(f"{indent}note: {n}")
        if self.inner is not None:
            lines.append(f"{indent}inner:")
            lines.append(self.inner.to_text(indent + "  "))
        return "\n".join(lines)


def _chain_cert(verdict, rule, chain, base, **witnesses) -> Certificate:
    return Certificate(verdict, rule, witnesses, tuple(chain), base)


# ---------------------------------------------------------------------------
# boolean structures


def classify_boolean(b: Structure) -> tuple[ComplexityClass, Certificate]:
    try:
        require_boolean(b)
    except BooleanError as e:
        raise ClassifierError(str(e)) from None
    nb, dropped = normalize(b)
    notes = tuple(f"dropped {kind} relation {name}" for name, kind in dropped)
    if not nb.sig.relations:
        return LOGSPACE, Certificate(LOGSPACE, "boolean:normalized-away", {}, notes=notes)
    w01 = dominates_boolean(nb, 0, 1)
    w10 = dominates_boolean(nb, 1, 0)
    if w01 is None or w10 is None:
        wit = {}
        if w01 is None:
            wit["forall_canon"], wit["exists_canon"] = 0, 1
        if w10 is None:
            key = "also" if w01 is None else ""
            wit[f"{key}forall_canon"], wit[f"{key}exists_canon"] = 1, 0
        return LOGSPACE, Certificate(LOGSPACE, "boolean:canon", wit, notes=notes)
    case = boolean_case(nb)
    g, ctx = build_boolean_gadget(nb, case)
    wit = {"violation_1_over_0": w01, "violation_0_over_1": w10, "gadget": g, "context": ctx}
    base = "K2" if case == "neither-constant" else "K2bar"
    return PSPACE, Certificate(PSPACE, f"boolean:{case}", wit, base=base, notes=notes)


# ---------------------------------------------------------------------------
# digraphs: case analysis


def _pair_type(h: Digraph, end: int, mid: int) -> str:
    f, b = h.has(end, mid), h.has(mid, end)
    return "double" if f and b else "in" if f else "out" if b else "none"


def _adjacent(h: Digraph, x: int, y: int) -> bool:
    return h.has(x, y) or h.has(y, x)


def _logspace_by_pair(h: Digraph, rule: str) -> Certificate:
    """Logspace certificate from canons or a good pair of ``h``."""
    fa, ex = sorted(forall_canons(h)), sorted(exists_canons(h))
    if fa and ex:
        return Certificate(LOGSPACE, rule, {"forall_canon": fa[0], "exists_canon": ex[0], "good_pair": (fa[0], ex[0])})
    pairs = sorted(good_pairs(h))
    if not pairs:
        raise ClassifierError(f"{rule}: expected a good pair in {sorted(h.edges)}")
    return Certificate(LOGSPACE, rule, {"good_pair": pairs[0]})


def _hard_by_chain(h: Digraph, rule: str, chain: list[ChainStep], **witnesses) -> Certificate:
    """Run ``chain`` on ``h`` and name the base it reaches."""
    g = h
    flips = 0
    for step in chain:
        g = step.apply(g)
        flips += step.op == "complement"
    for name, cls in BASES.items():
        if g.size == _catalog_digraph(name).size and is_isomorphic(g, _catalog_digraph(name)):
            verdict = cls.dual() if flips % 2 else cls
            return _chain_cert(verdict, rule, chain, name, **witnesses)
    raise ClassifierError(f"{rule}: chain ends at {sorted(g.edges)}, which is not a base case")


def _dual_of(h: Digraph, case: str) -> Certificate:
    _, inner = classify_digraph(complement(h))
    return Certificate(inner.verdict.dual(), f"dual-of:{inner.rule}", {"case": case}, inner=inner)


def classify_digraph(h: Digraph) -> tuple[ComplexityClass, Certificate]:
    if h.sig.relations != (("E", 2),):
        raise ClassifierError("not a digraph")
    if h.size > 3:
        raise ClassifierError(f"digraphs of size {h.size} are out of scope (at most 3)")
    if h.size <= 1:
        wit = {"good_pair": (0, 0)} if h.size == 1 else {}
        return LOGSPACE, Certificate(LOGSPACE, "trivial-size", wit)
    if h.size == 2:
        return classify_boolean(h)
    cert = _classify3(h)
    return cert.verdict, cert


def _classify3(h: Digraph) -> Certificate:
    loops = h.loops()
    iso = isolated_vertices(h)

    # non-connected
    if not is_connected(h):
        if iso:
            if not h.edges:
                return _logspace_by_pair(h, "no-edges")
            if not loops:
                return _hard_by_chain(h, "isolated+antireflexive", [ChainStep("symclos", expect="K1+K2")], forall_canon=iso[0])
            return Certificate(LOGSPACE, "isolated+looped", {"good_pair": (iso[0], min(loops))})
        return _hard_by_chain(h, "non-connected-no-isolated", [ChainStep("symclos"), ChainStep("tranclos")])

    if not loops:
        return _hard_by_chain(h, "connected-antireflexive", [ChainStep("symclos")])
    if len(loops) == 3:
        return _dual_of(h, "reflexive")

    adjacent = [(x, y) for x, y in ((0, 1), (0, 2), (1, 2)) if _adjacent(h, x, y)]
    if len(adjacent) == 2:
        return _classify_path(h, loops, adjacent)
    return _classify_triangle(h, loops)


def _classify_path(h: Digraph, loops: set, adjacent: list) -> Certificate:
    mid = next(v for v in range(3) if all(v in p for p in adjacent))
    ends = [v for v in range(3) if v != mid]
    kernel = [ChainStep("tranclos"), ChainStep("doub", expect="K1_1+K11_2")]

    if mid not in loops:
        rule = "path-end-loop" if len(loops) == 1 else "path-end-loops"
        steps = [ChainStep("symclos", expect="P100_3" if len(loops) == 1 else "P101_3"), ChainStep("complement"), ChainStep("tranclos")]
        return _hard_by_chain(h, rule, steps)

    if len(loops) == 1:
        t1, t2 = (_pair_type(h, e, mid) for e in ends)
        if {t1, t2} == {"in", "out"}:
            steps = [ChainStep("complement"), ChainStep("gadget", "DP010bar-defines-K1K2-corrected", "K1+K2")]
            return _hard_by_chain(h, "path-middle-loop-directed", steps, exists_canon=mid)
        if is_twin_pair(h, *ends):
            g = contract_twin(h, *ends)
            _, inner = classify_boolean(g)
            return Certificate(inner.verdict, "path-middle-loop-twins", {"twins": tuple(ends)}, (ChainStep("twin"),), inner=inner)
        return _logspace_by_pair(h, "path-middle-loop-canons")

    # loops at the middle and at one end
    a = next(e for e in ends if e in loops)
    c = next(e for e in ends if e not in loops)
    ta, tc = _pair_type(h, a, mid), _pair_type(h, c, mid)
    if ta == "double" and tc == "double":
        return _logspace_by_pair(h, "path-two-loops-canons")
    if ta == "double" or (ta, tc) in (("in", "in"), ("out", "out")):
        fa, ex = forall_canons(h), exists_canons(h)
        rule = "path-two-loops-canons" if fa and ex else "path-two-loops-forall-canon+good-pair"
        return _logspace_by_pair(h, rule)
    if tc == "double":
        return _hard_by_chain(h, "path-two-loops-doub-tranclos-kernel", kernel)
    to_h5 = [ChainStep("gadget", "DP110-defines-H5", "H5")]
    if (ta, tc) == ("in", "out"):
        return _hard_by_chain(h, "path-two-loops-gadget", to_h5 + kernel)
    return _hard_by_chain(h, "path-two-loops-gadget", [ChainStep("gadget", "DP011-defines-H5prime", "DP110_3")] + to_h5 + kernel)


def _out_degree(h: Digraph, x: int) -> int:
    return sum(h.has(x, y) for y in range(3) if y != x)


def _classify_triangle(h: Digraph, loops: set) -> Certificate:
    double = any(h.has(x, y) and h.has(y, x) for x, y in ((0, 1), (0, 2), (1, 2)))
    if double:
        return _dual_of(h, "triangle-double-edge")
    if len(loops) == 2:
        return _dual_of(h, "tournament-two-loops")
    (v,) = loops
    degrees = sorted(_out_degree(h, x) for x in range(3))
    if degrees == [1, 1, 1]:
        steps = [ChainStep("complement"), ChainStep("gadget", "H6bar-defines-DP100bar", "~DP100_3"), ChainStep("complement", expect="DP100_3")]
        steps += [ChainStep("symclos", expect="P100_3"), ChainStep("complement"), ChainStep("tranclos")]
        return _hard_by_chain(h, "tournament-cyclic", steps)
    if _out_degree(h, v) == 1:
        steps = [ChainStep("complement"), ChainStep("gadget", "H8bar-defines-K1K2", "K1+K2")]
        return _hard_by_chain(h, "tournament-loop-in-middle", steps, exists_canon=v)
    pairs = sorted(good_pairs(complement(h)))
    if not pairs:
        raise ClassifierError("tournament-loop-at-end: complement has no good pair")
    return Certificate(LOGSPACE, "tournament-loop-at-end", {"complement_good_pair": pairs[0]})


# ---------------------------------------------------------------------------
# independent classifier and certificate checking


def classify_digraph_semantic(h: Digraph) -> ComplexityClass:
    if h.size > 3:
        raise ClassifierError(f"digraphs of size {h.size} are out of scope (at most 3)")
    if good_pairs(h):
        return LOGSPACE
    if forall_canons(h):
        return NP
    if exists_canons(h):
        return CONP
    return PSPACE


def check_certificate(s: Structure, cert: Certificate) -> list[str]:
    """Re-run the tests named by ``cert`` on ``s``; returns the problems found."""
    problems: list[str] = []
    w = cert.witnesses
    if cert.inner is not None and cert.rule.startswith("dual-of:"):
        if cert.verdict != cert.inner.verdict.dual():
            problems.append("verdict is not the dual of the inner verdict")
        return problems + check_certificate(complement(s.as_digraph()), cert.inner)

    if cert.rule.startswith("boolean:"):
        return problems + _check_boolean(s, cert)

    h = s.as_digraph()
    if cert.rule == "trivial-size" and h.size > 1:
        problems.append("trivial-size used on a digraph with more than one vertex")
    if "good_pair" in w and not is_good_pair(h, *w["good_pair"]):
        problems.append(f"{w['good_pair']} is not a good pair")
    if "complement_good_pair" in w and not is_good_pair(complement(h), *w["complement_good_pair"]):
        problems.append(f"{w['complement_good_pair']} is not a good pair of the complement")
    if "forall_canon" in w and not is_forall_canon(h, w["forall_canon"]):
        problems.append(f"{w['forall_canon']} is not a forall-canon")
    if "exists_canon" in w and not is_exists_canon(h, w["exists_canon"]):
        problems.append(f"{w['exists_canon']} is not an exists-canon")
    if "twins" in w:
        x, y = w["twins"]
        if not is_twin_pair(h, x, y):
            problems.append(f"{w['twins']} are not twins")
        elif cert.inner is None or cert.inner.verdict != cert.verdict:
            problems.append("twin contraction must keep the verdict of the inner certificate")
        else:
            problems += check_certificate(contract_twin(h, x, y), cert.inner)
        return problems

    if cert.verdict == LOGSPACE:
        if cert.rule not in ("trivial-size",) and not ({"good_pair", "complement_good_pair"} & set(w)):
            problems.append("Logspace certificate without a good pair")
        return problems
    if cert.verdict == NP and "forall_canon" not in w:
        problems.append("NP certificate without a forall-canon")
    if cert.verdict == CONP and "exists_canon" not in w:
        problems.append("coNP certificate without an exists-canon")
    if not cert.chain or cert.base not in BASES:
        return problems + ["hardness certificate without a chain to a base case"]
    g, flips = h, 0
    for step in cert.chain:
        try:
            g = step.apply(g)
        except Exception as e:  # a broken step is a certificate failure, not a crash
            return problems + [f"step {step} failed: {e}"]
        flips += step.op == "complement"
        if step.expect and not is_isomorphic(g, _catalog_digraph(step.expect)):
            problems.append(f"step {step} gave {sorted(g.edges)}")
    if not is_isomorphic(g, _catalog_digraph(cert.base)):
        problems.append(f"chain ends at {sorted(g.edges)}, not {cert.base}")
    want = BASES[cert.base].dual() if flips % 2 else BASES[cert.base]
    if want != cert.verdict:
        problems.append(f"chain gives {want.value}, certificate says {cert.verdict.value}")
    return problems


def _check_boolean(b: Structure, cert: Certificate) -> list[str]:
    problems: list[str] = []
    nb, _ = normalize(b)
    w = cert.witnesses
    if cert.rule == "boolean:normalized-away":
        return [] if not nb.sig.relations else ["relations remain after normalization"]
    if cert.rule == "boolean:canon":
        lo, hi = w["forall_canon"], w["exists_canon"]
        if dominates_boolean(nb, lo, hi) is not None:
            problems.append(f"{hi} does not dominate {lo}")
        return problems
    tables = dict((n, t) for n, _, t in nb.relation_items())
    for key in ("violation_1_over_0", "violation_0_over_1"):
        v = w[key]
        if v.tuple not in tables[v.relation] or v.flipped in tables[v.relation]:
            problems.append(f"{key} is not a violation")
    g = w["gadget"]
    got = interpret_gadget(nb, g).as_digraph()
    if got.edges != _catalog_digraph(cert.base).edges:
        problems.append(f"gadget defines {sorted(got.edges)}, not {cert.base}")
    return problems


# ---------------------------------------------------------------------------
# the atlas


@dataclass(frozen=True)
class TableRow:
    digraph: Digraph
    verdict: ComplexityClass
    certificate: Certificate

    @property
    def code(self) -> str:
        return edge_code(self.digraph)

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "edges": [list(e) for e in sorted(self.digraph.edges)],
            "class": self.verdict.value,
            "rule": self.certificate.rule,
        }


def classification_table(size: int, up_to_iso: bool = False, check: bool = True) -> list[TableRow]:
    """Classify every labelled digraph of ``size``; cross-checks raise :class:`CrossCheckError`."""
    if size < 0 or size > 3:
        raise ClassifierError("table size must be between 0 and 3")
    rows = [TableRow(h, *classify_digraph(h)) for h in all_digraphs(size)]
    if check:
        cross_check(rows)
    if up_to_iso:
        seen: set[str] = set()
        kept = []
        for r in rows:
            key = canonical_code(r.digraph)
            if key not in seen:
                seen.add(key)
                kept.append(r)
        rows = kept
    return rows


def cross_check(rows: list[TableRow]) -> None:
    by_code = {edge_code(r.digraph): r for r in rows}
    by_class: dict[str, ComplexityClass] = {}
    for r in rows:
        h, v, cert = r.digraph, r.verdict, r.certificate
        if not isinstance(v, ComplexityClass) or v != cert.verdict:
            raise CrossCheckError("verdict and certificate disagree", h)
        comp = by_code[edge_code(complement(h))]
        if comp.verdict != v.dual():
            raise CrossCheckError(f"complement has {comp.verdict.value}, expected {v.dual().value}", h)
        key = canonical_code(h)
        if by_class.setdefault(key, v) != v:
            raise CrossCheckError("isomorphic digraphs classified differently", h)
        sem = classify_digraph_semantic(h)
        if sem != v:
            raise CrossCheckError(f"semantic classifier says {sem.value}, case analysis says {v.value}", h)
        problems = membership_problems(h, v)
        problems += check_certificate(h, cert)
        if problems:
            raise CrossCheckError("; ".join(problems), h)


def membership_problems(h: Digraph, v: ComplexityClass) -> list[str]:
    fa, ex = forall_canons(h), exists_canons(h)
    if v == NP and not fa:
        return ["NP-complete without a forall-canon"]
    if v == CONP and not ex:
        return ["coNP-complete without an exists-canon"]
    if v == PSPACE and (fa or ex):
        return ["PSPACE-complete although a canon exists"]
    return []


def canon_sets_agree_boolean(h: Digraph) -> bool:
    """Digraph canons coincide with boolean domination on a 2-vertex digraph."""
    from .boolean import domination_violation

    for x in range(2):
        other = 1 - x
        dominated = domination_violation(h, x, other) is None
        dominating = domination_violation(h, other, x) is None
        if is_forall_canon(h, x) != dominated or is_exists_canon(h, x) != dominating:
            return False
    return True
