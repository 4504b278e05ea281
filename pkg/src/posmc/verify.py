"""Empirical verification suites.

Every claim the classifier and the reductions rely on is checked
here by brute force: on every small structure, for every sentence of an
exhaustive suite plus seeded random sentences.  Bulk checks use
:class:`~posmc.evaluator.StructureBatch`; the memoized evaluator is used for
one-off structures and to cross-check the batch route.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import catalog
from .boolean import all_boolean_structures, dominates_via_canonical, domination_violation, normalize
from .canons import exists_canons, forall_canons, good_pairs, is_exists_canon, is_forall_canon, is_good_pair
from .classifier import (
    LOGSPACE,
    CrossCheckError,
    canon_sets_agree_boolean,
    classification_table,
    classify_boolean,
    classify_digraph,
)
from .evaluator import StructureBatch, evaluate
from .logic import DIGRAPH, Formula, Signature, as_formula, dualize, instantiate, render_formula
from .reductions import (
    BOOLEAN_CASES,
    CORRECTED,
    NAE_SIG,
    PRINTED,
    RewriteRule,
    boolean_case,
    build_boolean_gadget,
    check_gadget,
    gadget_catalog,
    interpret_gadget,
    reduce_sentence,
)
from .structures import Digraph, all_digraphs, closure, complement, contract_twin, find_twins
from .suites import enumerate_sentences

SUITES = (
    "canon-lemma",
    "duality",
    "closures",
    "boolean-gadgets",
    "digraph-gadgets",
    "twins",
    "good-pair",
    "cross-classifier",
)


@dataclass(frozen=True)
class Profile:
    """Suite bounds: exhaustive part plus seeded random sentences."""

    max_quantifiers: int = 3
    max_atoms: int = 3
    random_count: int = 500
    random_quantifiers: int = 6
    random_atoms: int = 6
    boolean_max_arity: int = 4
    seed: int = 0


FULL = Profile()
QUICK = Profile(max_quantifiers=2, max_atoms=2, random_count=40, random_quantifiers=4, random_atoms=4, boolean_max_arity=3)


@dataclass
class PropertyResult:
    suite: str
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[str] = None
    seconds: float = 0.0

    def line(self, timings: bool = True) -> str:
        when = f", {self.seconds:.2f}s" if timings else ""
        head = f"{'PASS' if self.passed else 'FAIL'} {self.suite}: {self.name} ({self.checked} checks{when})"
        return head if self.passed else f"{head}\n  counterexample: {self.counterexample}"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "property": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


def sentence_suite(sig: Signature, profile: Profile, negation: bool = False, max_atoms: Optional[int] = None) -> list[Formula]:
    """Exhaustive sentences within the profile bounds, then the random ones."""
    atoms = profile.max_atoms if max_atoms is None else max_atoms
    out = [p.to_formula() for p in enumerate_sentences(sig, profile.max_quantifiers, atoms, negation=negation)]
    rnd = enumerate_sentences(
        sig,
        profile.random_quantifiers,
        profile.random_atoms,
        mode="seeded-random",
        seed=profile.seed,
        count=profile.random_count,
        negation=negation,
    )
    out.extend(p.to_formula() for p in rnd)
    return out


class _Check:
    """Accumulates one property: a count and the first counterexample."""

    def __init__(self, suite: str, name: str):
        self.suite, self.name = suite, name
        self.count = 0
        self.failure: Optional[str] = None
        self.start = time.perf_counter()

    def ok(self) -> bool:
        return self.failure is None

    def record(self, n: int, failure: Optional[str] = None) -> None:
        self.count += n
        if failure and self.failure is None:
            self.failure = failure

    def result(self) -> PropertyResult:
        return PropertyResult(self.suite, self.name, self.failure is None, self.count, self.failure, time.perf_counter() - self.start)


def _edges(s) -> str:
    if isinstance(s, Digraph) or s.sig == DIGRAPH:
        return f"size {s.size} edges {sorted(s.as_digraph().edges)}"
    return f"size {s.size} " + " ".join(f"{n}={sorted(t)}" for n, _, t in s.relation_items())


def _compare(check: _Check, batch: StructureBatch, phi: Formula, left: np.ndarray, right: np.ndarray, mask=None, expect_equal=True) -> None:
    good = (left == right) if expect_equal else (left != right)
    if mask is not None:
        good = good | ~mask
        n = int(mask.sum())
    else:
        n = len(good)
    bad = np.flatnonzero(~good)
    check.record(n, None if not len(bad) else f"{render_formula(phi)} on {_edges(batch.structures[bad[0]])}")


def small_digraphs(max_size: int = 3) -> list[Digraph]:
    return [h for n in range(1, max_size + 1) for h in all_digraphs(n)]


# ---------------------------------------------------------------------------
# suites


def suite_canon_lemma(profile: Profile = FULL) -> list[PropertyResult]:
    fa, ex, gp, dom, batch_check = (
        _Check("canon-lemma", "forall-canon instantiation preserves truth"),
        _Check("canon-lemma", "exists-canon instantiation preserves truth"),
        _Check("canon-lemma", "good-pair instantiation preserves truth"),
        _Check("canon-lemma", "boolean domination instantiation preserves truth"),
        _Check("canon-lemma", "batch evaluator agrees with memoized evaluator"),
    )
    suite = sentence_suite(DIGRAPH, profile)
    for n in (1, 2, 3):
        graphs = list(all_digraphs(n))
        batch = StructureBatch(graphs)
        fmask = {x: np.array([is_forall_canon(h, x) for h in graphs]) for x in range(n)}
        emask = {y: np.array([is_exists_canon(h, y) for h in graphs]) for y in range(n)}
        gmask = {(x, y): np.array([is_good_pair(h, x, y) for h in graphs]) for x in range(n) for y in range(n)}
        for phi in suite:
            truth = batch.evaluate(phi)
            for x in range(n):
                if fmask[x].any():
                    _compare(fa, batch, phi, truth, batch.evaluate(instantiate(phi, universal_value=x)), fmask[x])
                if emask[x].any():
                    _compare(ex, batch, phi, truth, batch.evaluate(instantiate(phi, existential_value=x)), emask[x])
            for (x, y), m in gmask.items():
                if m.any():
                    _compare(gp, batch, phi, truth, batch.evaluate(instantiate(phi, x, y)), m)
        # spot-check the batch route against the reference evaluator
        rng = random.Random(profile.seed + n)
        for phi in rng.sample(suite, min(60, len(suite))):
            truth = batch.evaluate(phi)
            idx = rng.randrange(len(graphs))
            ref = evaluate(graphs[idx], phi)
            batch_check.record(1, None if ref == truth[idx] else f"{render_formula(phi)} on {_edges(graphs[idx])}")

    for arity in (1, 2, 3):
        sig = Signature((("R1", arity),))
        structs = list(all_boolean_structures((arity,)))
        batch = StructureBatch(structs)
        masks = {(lo, hi): np.array([domination_violation(b, lo, hi) is None for b in structs]) for lo, hi in ((0, 1), (1, 0))}
        bsuite = sentence_suite(sig, profile)
        for phi in bsuite:
            truth = batch.evaluate(phi)
            for (lo, hi), m in masks.items():
                _compare(dom, batch, phi, truth, batch.evaluate(instantiate(phi, lo, hi)), m)
    return [c.result() for c in (fa, ex, gp, dom, batch_check)]


def suite_duality(profile: Profile = FULL) -> list[PropertyResult]:
    chk = _Check("duality", "H |= phi iff complement(H) does not satisfy dual(phi)")
    inv = _Check("duality", "dualize is an involution")
    suite = sentence_suite(DIGRAPH, profile)
    for n in (1, 2, 3):
        graphs = list(all_digraphs(n))
        batch = StructureBatch(graphs)
        cbatch = StructureBatch([complement(h) for h in graphs])
        for phi in suite:
            d = dualize(phi)
            _compare(chk, batch, phi, batch.evaluate(phi), cbatch.evaluate(d), expect_equal=False)
    for phi in suite:
        inv.record(1, None if dualize(dualize(phi)) == phi else render_formula(phi))
    return [chk.result(), inv.result()]


def _rewrite_check(name: str, rule: RewriteRule, hosts: list, targets: list, suite: list[Formula]) -> PropertyResult:
    chk = _Check("closures", name)
    hb, tb = StructureBatch(hosts), StructureBatch(targets)
    for phi in suite:
        _compare(chk, tb, phi, tb.evaluate(phi), hb.evaluate(reduce_sentence(rule, phi)))
    return chk.result()


def suite_closures(profile: Profile = FULL) -> list[PropertyResult]:
    out = []
    suite = sentence_suite(DIGRAPH, profile)
    for kind, rule_name in (("sym", "symclos"), ("doub", "doub"), ("tran", "tranclos")):
        for n in (1, 2, 3):
            graphs = list(all_digraphs(n))
            # a new loop can need a closed walk of length n, one more than the
            # printed expansion covers, so the host of size n gets tranclos(n+1)
            rule = RewriteRule("tranclos", n=n + 1) if kind == "tran" else RewriteRule(rule_name)
            out.append(
                _rewrite_check(
                    f"{rule} rewrite: closure(H,{kind}) |= phi iff H |= rewrite(phi), size {n}",
                    rule,
                    graphs,
                    [closure(h, kind) for h in graphs],
                    suite,
                )
            )
    printed = _Check("closures", "printed tranclos(3) misses loops closed by a 3-cycle, as recorded")
    cycle = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    loop = as_formula(enumerate_sentences(DIGRAPH, 1, 1).__next__())
    miss = evaluate(closure(cycle, "tran"), loop) and not evaluate(cycle, reduce_sentence(RewriteRule("tranclos", n=3), loop))
    printed.record(1, None if miss else "printed expansion unexpectedly agrees")
    out.append(printed.result())
    nae = catalog.structure("B_NAE")
    k2 = catalog.digraph("K2")
    chk = _Check("closures", "NAE rewrite: B_NAE |= phi iff K2 |= rewrite(phi)")
    for phi in sentence_suite(NAE_SIG, profile):
        left, right = evaluate(nae, phi), evaluate(k2, reduce_sentence("nae_to_k2", phi))
        chk.record(1, None if left == right else render_formula(phi))
    out.append(chk.result())
    return out


def suite_boolean_gadgets(profile: Profile = FULL) -> list[PropertyResult]:
    shortcut = _Check("boolean-gadgets", "per-relation domination equals canonical-relation domination (normalized)")
    per_case = {c: _Check("boolean-gadgets", f"{c} gadget defines its target") for c in BOOLEAN_CASES}
    shapes = [s for k in (1, 2) for s in itertools.product(range(1, profile.boolean_max_arity + 1), repeat=k) if sum(s) <= profile.boolean_max_arity]
    for shape in shapes:
        for b in all_boolean_structures(shape):
            nb, dropped = normalize(b)
            if dropped or not nb.sig.relations:
                continue
            for lo, hi in ((0, 1), (1, 0)):
                a = domination_violation(b, lo, hi) is None
                shortcut.record(1, None if a == dominates_via_canonical(b, lo, hi) else _edges(b))
            case = boolean_case(nb)
            if case in ("ones-only", "zeros-only") and (domination_violation(nb, 0, 1) is None or domination_violation(nb, 1, 0) is None):
                continue
            g, _ = build_boolean_gadget(nb, case)
            got = interpret_gadget(nb, g).as_digraph()
            want = catalog.digraph(g.expected_result)
            per_case[case].record(1, None if got.edges == want.edges else f"{_edges(nb)} defines {sorted(got.edges)}")
    cls = _Check("boolean-gadgets", "named boolean structures classify as stated")
    for name, want in (("B1", LOGSPACE), ("B2", "PSPACE-complete"), ("B_NAE", "PSPACE-complete")):
        v, _ = classify_boolean(catalog.structure(name))
        cls.record(1, None if v == want or v.value == want else f"{name}: {v.value}")
    return [shortcut.result()] + [c.result() for c in per_case.values()] + [cls.result()]


def suite_digraph_gadgets(profile: Profile = FULL) -> list[PropertyResult]:
    recon = _Check("digraph-gadgets", "reconstructed catalog entries are unique up to isomorphism")
    for name in catalog.names():
        if catalog.catalog(name).provenance == catalog.RECONSTRUCTED:
            try:
                catalog.verify_reconstruction(name)
                recon.record(1)
            except catalog.CatalogError as e:
                recon.record(1, str(e))
    out = [recon.result()]
    results = {}
    for g in gadget_catalog():
        if g.host is None:
            continue
        chk = _Check("digraph-gadgets", f"{g.name} ({g.provenance}) on {g.host} gives {g.expected_result}")
        res = check_gadget(g)
        results[g.name] = res.ok
        if g.provenance == PRINTED and not res.ok and any(h.corrects == g.name for h in gadget_catalog()):
            # documented discrepancy: passes if the corrected sibling verifies
            chk.name = f"{g.name} (PRINTED) on {g.host} differs from {g.expected_result}, as recorded"
            chk.record(1, None if sorted(res.result.tables[0]) == [(0, 0), (2, 0)] else str(sorted(res.result.tables[0])))
        else:
            chk.record(1, None if res.ok else f"defines {sorted(res.result.tables[0])}")
        out.append(chk.result())
    pair = _Check("digraph-gadgets", "every printed gadget or its corrected sibling verifies")
    for g in gadget_catalog():
        if g.provenance == PRINTED and g.expected_result:
            sib = [h.name for h in gadget_catalog() if h.corrects == g.name and h.provenance == CORRECTED]
            pair.record(1, None if results.get(g.name) or any(results.get(s) for s in sib) else g.name)
    out.append(pair.result())
    # substitution contract: defined digraph |= phi iff host |= rewrite(phi)
    suite = sentence_suite(DIGRAPH, profile)
    for g in gadget_catalog():
        if g.host is None or g.target != "E":
            continue
        host = catalog.structure(g.host)
        defined = interpret_gadget(host, g)
        out.append(
            _rewrite_check_named(
                "digraph-gadgets", f"{g.name} rewrite preserves truth", RewriteRule("gadget", gadget_name=g.name), [host], [defined], suite
            )
        )
    return out


def _rewrite_check_named(suite_name, name, rule, hosts, targets, suite) -> PropertyResult:
    r = _rewrite_check(name, rule, hosts, targets, suite)
    r.suite = suite_name
    return r


def suite_twins(profile: Profile = FULL) -> list[PropertyResult]:
    suite = sentence_suite(DIGRAPH, profile, negation=True)
    pairs: list[tuple[Digraph, Digraph, str]] = [
        (catalog.digraph("P000_3"), catalog.digraph("K2"), "P000_3 ~ K2"),
        (catalog.digraph("K1_1+K11_2"), catalog.digraph("K2bar"), "K1_1+K11_2 ~ K2bar"),
    ]
    out = []
    for big, small, label in pairs:
        chk = _Check("twins", f"{label} agree on sentences with negation")
        for phi in suite:
            a, b = evaluate(big, phi), evaluate(small, phi)
            chk.record(1, None if a == b else render_formula(phi))
        out.append(chk.result())
    hosts, contracted = [], []
    for h in all_digraphs(3):
        for x, y in find_twins(h):
            hosts.append(h)
            contracted.append(contract_twin(h, x, y))
    chk = _Check("twins", f"every twin contraction at size 3 ({len(hosts)} pairs) preserves truth with negation")
    hb, cb = StructureBatch(hosts), StructureBatch(contracted)
    for phi in suite:
        _compare(chk, hb, phi, hb.evaluate(phi), cb.evaluate(phi))
    out.append(chk.result())
    return out


def suite_good_pair(profile: Profile = FULL) -> list[PropertyResult]:
    out = []
    suite = sentence_suite(DIGRAPH, profile)
    for name in ("~H7", "~H7'"):
        h = catalog.digraph(name)
        pairs = sorted(good_pairs(h))
        chk = _Check("good-pair", f"{name}: phi iff phi[forall/x, exists/y] for good pair {pairs[:1]}")
        if not pairs:
            chk.record(1, "no good pair")
        else:
            x, y = pairs[0]
            for phi in suite:
                a, b = evaluate(h, phi), evaluate(h, instantiate(phi, x, y))
                chk.record(1, None if a == b else render_formula(phi))
        out.append(chk.result())
    canon = _Check("good-pair", "a forall-canon with an exists-canon always forms a good pair")
    comp = _Check("good-pair", "forall-canons of H are the exists-canons of its complement")
    for h in small_digraphs(3):
        for x in forall_canons(h):
            for y in exists_canons(h):
                canon.record(1, None if is_good_pair(h, x, y) else f"{(x, y)} in {_edges(h)}")
        comp.record(1, None if forall_canons(h) == exists_canons(complement(h)) else _edges(h))
    return out + [canon.result(), comp.result()]


def suite_cross_classifier(profile: Profile = FULL) -> list[PropertyResult]:
    out = []
    rows = {}
    for n in (1, 2, 3):
        chk = _Check("cross-classifier", f"size {n} atlas passes duality, isomorphism, semantic, membership and certificate checks")
        try:
            rows[n] = classification_table(n)
            chk.record(len(rows[n]))
        except CrossCheckError as e:
            chk.record(1, f"{e} on {_edges(e.digraph)}")
        out.append(chk.result())
    four = _Check("cross-classifier", "size 3 uses all four classes, size 2 only Logspace and PSPACE")
    if 3 in rows and 2 in rows:
        c3 = {r.verdict for r in rows[3]}
        c2 = {r.verdict.value for r in rows[2]}
        four.record(1, None if len(c3) == 4 and c2 <= {"Logspace", "PSPACE-complete"} else f"{c3} {c2}")
    out.append(four.result())
    cons = _Check("cross-classifier", "size-2 digraph canons coincide with boolean domination")
    for h in all_digraphs(2):
        same = canon_sets_agree_boolean(h) and classify_digraph(h)[0] == classify_boolean(h)[0]
        cons.record(1, None if same else _edges(h))
    out.append(cons.result())
    sound = _Check("cross-classifier", "Logspace verdicts: instantiation at a good pair preserves truth")
    suite = sentence_suite(DIGRAPH, profile)
    for n in (1, 2, 3):
        rows_l = [r for r in rows.get(n, []) if r.verdict == LOGSPACE]
        if not rows_l:
            continue
        graphs = [r.digraph for r in rows_l]
        pairs = [min(good_pairs(h)) for h in graphs]
        batch = StructureBatch(graphs)
        groups: dict[tuple[int, int], np.ndarray] = {}
        for i, p in enumerate(pairs):
            groups.setdefault(p, np.zeros(len(graphs), dtype=bool))[i] = True
        for phi in suite:
            truth = batch.evaluate(phi)
            for (x, y), m in groups.items():
                _compare(sound, batch, phi, truth, batch.evaluate(instantiate(phi, x, y)), m)
    out.append(sound.result())
    return out


SUITE_FUNCTIONS: dict[str, Callable[[Profile], list[PropertyResult]]] = {
    "canon-lemma": suite_canon_lemma,
    "duality": suite_duality,
    "closures": suite_closures,
    "boolean-gadgets": suite_boolean_gadgets,
    "digraph-gadgets": suite_digraph_gadgets,
    "twins": suite_twins,
    "good-pair": suite_good_pair,
    "cross-classifier": suite_cross_classifier,
}


def run_suites(names: Iterable[str], profile: Profile = FULL) -> list[PropertyResult]:
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    for n in names:
        if n not in SUITE_FUNCTIONS:
            raise KeyError(f"unknown suite {n!r}")
    out: list[PropertyResult] = []
    for n in names:
        out.extend(SUITE_FUNCTIONS[n](profile))
    return out
