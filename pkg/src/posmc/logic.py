"""Formulas of equality-free first-order logic.

The AST is made of small frozen dataclasses.  Variables are plain strings;
element constants (``Const``) only ever appear after :func:`instantiate` or
:func:`substitute` put them there, the parser never produces them.

Surface syntax::

    formula := quant | disj
    quant   := ("forall" | "exists") IDENT "." formula
    disj    := conj ("|" conj)*
    conj    := unit ("&" unit)*
    unit    := atom | "~" unit | "(" formula ")" | "true" | "false"
    atom    := IDENT "(" IDENT ("," IDENT)* ")"

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union


class FormulaError(Exception):
    """Base class for formula errors."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")


class SemanticError(FormulaError):
    """A well-formed formula that does not fit its signature or fragment."""


class UnknownRelationError(SemanticError):
    pass


class ArityError(SemanticError):
    pass


class FragmentError(SemanticError):
    pass


# ---------------------------------------------------------------------------
# signatures and fragments


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.relations:
            if name in seen:
                raise ValueError(f"duplicate relation name {name!r}")
            if arity < 1:
                raise ValueError(f"relation {name!r} must have arity >= 1")
            seen.add(name)

    @classmethod
    def of(cls, **arities: int) -> "Signature":
        return cls(tuple(arities.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for rel, arity in self.relations:
            if rel == name:
                return arity
        raise UnknownRelationError(f"unknown relation {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(rel == name for rel, _ in self.relations)

    def __str__(self):
        return "<" + ", ".join(f"{n}/{a}" for n, a in self.relations) + ">"


DIGRAPH = Signature((("E", 2),))


@dataclass(frozen=True)
class Fragment:
    allow_negation: bool = False
    allow_universal: bool = True
    allow_disjunction: bool = True

    def __str__(self):
        ops = []
        if self.allow_negation:
            ops.append("~")
        ops.append("exists")
        if self.allow_universal:
            ops.append("forall")
        ops.append("&")
        if self.allow_disjunction:
            ops.append("|")
        return "{" + ", ".join(ops) + "}"


POSITIVE = Fragment()
FULL = Fragment(allow_negation=True)
QCSP = Fragment(allow_disjunction=False)
EXISTENTIAL_POSITIVE = Fragment(allow_universal=False)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self):
        return f"@{self.value}"


Term = Union[str, Const]


class Formula:
    __slots__ = ()

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("atoms need at least one argument")
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self):
        return f"Atom({self.rel!r}, {self.args!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children; use conjoin()")

    def __repr__(self):
        return f"And({list(self.children)!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children; use disjoin()")

    def __repr__(self):
        return f"Or({list(self.children)!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    child: Formula

    def __repr__(self):
        return f"Not({self.child!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Exists({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Forall({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class TrueConst(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class FalseConst(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = TrueConst()
FALSE = FalseConst()

Quantifier = (Exists, Forall)


def conjoin(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disjoin(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def atom(rel: str, *args: Term) -> Atom:
    return Atom(rel, tuple(args))


# ---------------------------------------------------------------------------
# traversal helpers


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.children
    if isinstance(f, Not):
        return (f.child,)
    if isinstance(f, (Exists, Forall)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(a for a in f.args if isinstance(a, str))
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body) - {f.var}
    out: set[str] = set()
    for c in children(f):
        out |= free_variables(c)
    return frozenset(out)


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def variable_names(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, bound or free."""
    names: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            names.update(a for a in g.args if isinstance(a, str))
        elif isinstance(g, (Exists, Forall)):
            names.add(g.var)
    return names


def relations_used(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.setdefault(g.rel, len(g.args))
    return out


def quantifier_count(f: Formula) -> int:
    return sum(isinstance(g, (Exists, Forall)) for g in subformulas(f))


def is_quantifier_free(f: Formula) -> bool:
    return quantifier_count(f) == 0


def check_formula(f: Formula, sig: Optional[Signature] = None, frag: Optional[Fragment] = None) -> None:
    """Raise a :class:`SemanticError` if ``f`` leaves ``sig`` or ``frag``."""
    for g in subformulas(f):
        if isinstance(g, Atom) and sig is not None:
            arity = sig.arity(g.rel)
            if arity != len(g.args):
                raise ArityError(f"relation {g.rel!r} has arity {arity}, got {len(g.args)} arguments")
        if frag is None:
            continue
        if isinstance(g, Not) and not frag.allow_negation:
            raise FragmentError("connective outside fragment: '~'")
        if isinstance(g, Forall) and not frag.allow_universal:
            raise FragmentError("connective outside fragment: 'forall'")
        if isinstance(g, Or) and not frag.allow_disjunction:
            raise FragmentError("connective outside fragment: '|'")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().,&|~])
    """,
    re.VERBOSE,
)

KEYWORDS = {"forall", "exists", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup == "ident":
            kind = m.group() if m.group() in KEYWORDS else "ident"
            tokens.append((kind, m.group(), pos))
        elif m.lastgroup == "punct":
            tokens.append((m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature], frag: Fragment):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.frag = frag
        self.seen_arity: dict[str, int] = {}

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.formula()
        self.take("eof")
        return f

    def formula(self) -> Formula:
        if self.peek() in ("forall", "exists"):
            return self.quant()
        return self.disj()

    def quant(self) -> Formula:
        kind, _, pos = self.tokens[self.i]
        self.i += 1
        if kind == "forall" and not self.frag.allow_universal:
            raise FragmentError("connective outside fragment: 'forall'")
        var = self.take("ident")[1]
        self.take(".")
        body = self.formula()
        return Forall(var, body) if kind == "forall" else Exists(var, body)

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            if not self.frag.allow_disjunction:
                raise FragmentError("connective outside fragment: '|'")
            self.i += 1
            parts.append(self.conj())
        return disjoin(parts)

    def conj(self) -> Formula:
        parts = [self.unit()]
        while self.peek() == "&":
            self.i += 1
            parts.append(self.unit())
        return conjoin(parts)

    def unit(self) -> Formula:
        kind, value, pos = self.tokens[self.i]
        if kind == "~":
            if not self.frag.allow_negation:
                raise FragmentError("connective outside fragment: '~'")
            self.i += 1
            return Not(self.unit())
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "true":
            self.i += 1
            return TRUE
        if kind == "false":
            self.i += 1
            return FALSE
        if kind in ("forall", "exists"):
            # lenient: a quantifier in operand position scopes to the right
            return self.quant()
        if kind == "ident":
            return self.atom()
        what = repr(value) if kind != "eof" else "end of input"
        raise FormulaSyntaxError(f"unexpected {what}", pos, self.text)

    def atom(self) -> Atom:
        _, name, pos = self.take("ident")
        self.take("(")
        args = [self.take("ident")[1]]
        while self.peek() == ",":
            self.i += 1
            args.append(self.take("ident")[1])
        self.take(")")
        if self.sig is not None:
            if name not in self.sig:
                raise UnknownRelationError(f"unknown relation {name!r}")
            arity = self.sig.arity(name)
        else:
            arity = self.seen_arity.setdefault(name, len(args))
        if arity != len(args):
            raise ArityError(f"relation {name!r} has arity {arity}, got {len(args)} arguments")
        return Atom(name, tuple(args))


def parse_formula(text: str, sig: Optional[Signature] = DIGRAPH, frag: Fragment = POSITIVE) -> Formula:
    """Parse ``text``.  With ``sig=None`` relation arities are inferred."""
    return _Parser(text, sig, frag).parse()


def infer_signature(f: Formula) -> Signature:
    return Signature(tuple(relations_used(f).items()))


# ---------------------------------------------------------------------------
# rendering


def _term(t: Term) -> str:
    return t if isinstance(t, str) else str(t)


def _operand(f: Formula) -> str:
    if isinstance(f, (Atom, Not, TrueConst, FalseConst)):
        return render_formula(f)
    return "(" + render_formula(f) + ")"


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(_term(a) for a in f.args)})"
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Not):
        return "~" + _operand(f.child)
    if isinstance(f, And):
        return " & ".join(_operand(c) for c in f.children)
    if isinstance(f, Or):
        return " | ".join(_operand(c) for c in f.children)
    if isinstance(f, Exists):
        return f"exists {f.var}. {render_formula(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {render_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# substitution


def fresh_name(base: str, used: set[str]) -> str:
    """A name derived from ``base`` that is not in ``used``."""
    if base not in used:
        return base
    root = base.rstrip("'")
    for cand in (root + "'", root + "''"):
        if cand not in used:
            return cand
    k = 1
    while f"{root}_{k}" in used:
        k += 1
    return f"{root}_{k}"


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free variables by terms, renaming binders to avoid capture."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(mapping.get(a, a) if isinstance(a, str) else a for a in f.args))
    if isinstance(f, (TrueConst, FalseConst)):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.child, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute(c, mapping) for c in f.children))
    # quantifier
    inner = {k: v for k, v in mapping.items() if k != f.var}
    if not inner:
        return f
    var = f.var
    incoming = {t for t in inner.values() if isinstance(t, str)}
    if var in incoming:
        used = variable_names(f.body) | incoming | set(inner)
        new = fresh_name(var, used)
        inner[var] = new
        var = new
    return type(f)(var, substitute(f.body, inner))


# ---------------------------------------------------------------------------
# prenex form


@dataclass(frozen=True)
class PrenexSentence:
    prefix: tuple[tuple[str, str], ...]  # ("forall" | "exists", variable)
    matrix: Formula

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if not is_quantifier_free(self.matrix):
            raise ValueError("matrix must be quantifier-free")

    def to_formula(self) -> Formula:
        f = self.matrix
        for q, v in reversed(self.prefix):
            f = Forall(v, f) if q == "forall" else Exists(v, f)
        return f

    @classmethod
    def from_formula(cls, f: Formula) -> "PrenexSentence":
        prefix = []
        while isinstance(f, (Exists, Forall)):
            prefix.append(("forall" if isinstance(f, Forall) else "exists", f.var))
            f = f.body
        return cls(tuple(prefix), f)

    def __str__(self):
        return render_formula(self.to_formula())


def to_prenex(f: Formula) -> PrenexSentence:
    """Pull all quantifiers of a negation-free sentence to the front.

    Quantifiers are collected left to right; a variable already bound
    earlier in the prefix is renamed.  Equivalence holds on non-empty
    universes.
    """
    if any(isinstance(g, Not) for g in subformulas(f)):
        raise FormulaError("prenex conversion of formulas with negation is not supported")
    free = free_variables(f)
    if free:
        raise FormulaError(f"not a sentence: free variables {sorted(free)}")
    avoid = variable_names(f)
    bound: set[str] = set()
    prefix: list[tuple[str, str]] = []

    def pull(g: Formula) -> Formula:
        if isinstance(g, (Exists, Forall)):
            var, body = g.var, g.body
            if var in bound:
                new = fresh_name(var, avoid | bound)
                body = substitute(body, {var: new})
                var = new
            bound.add(var)
            prefix.append(("forall" if isinstance(g, Forall) else "exists", var))
            return pull(body)
        if isinstance(g, (And, Or)):
            return type(g)(tuple(pull(c) for c in g.children))
        return g

    matrix = pull(f)
    return PrenexSentence(tuple(prefix), matrix)


def miniscope(f: Union[Formula, PrenexSentence]) -> Formula:
    """Push every quantifier as far inward as it will go.

    ``forall`` distributes over ``&`` and ``exists`` over ``|``; in the other
    two combinations, children without the bound variable move outside.  A
    quantifier whose variable does not occur is dropped, so equivalence holds
    on non-empty universes only.  Negations are left in place.
    """
    f = as_formula(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(c) for c in g.children))
        if isinstance(g, Not):
            return Not(go(g.child))
        if isinstance(g, (Exists, Forall)):
            return scope(type(g), g.var, go(g.body))
        return g

    def scope(q, var: str, body: Formula) -> Formula:
        if var not in free_variables(body):
            return body
        if not isinstance(body, (And, Or)):
            return q(var, body)
        if (q is Forall) == isinstance(body, And):
            return type(body)(tuple(scope(q, var, c) for c in body.children))
        inside = [c for c in body.children if var in free_variables(c)]
        outside = [c for c in body.children if var not in free_variables(c)]
        join = conjoin if isinstance(body, And) else disjoin
        if not outside:
            return q(var, body)
        return join(outside + [scope(q, var, join(inside))])

    return go(f)


def as_formula(f: Union[Formula, PrenexSentence]) -> Formula:
    return f.to_formula() if isinstance(f, PrenexSentence) else f


# ---------------------------------------------------------------------------
# syntactic transformations


def dualize(f: Union[Formula, PrenexSentence], negate_atoms: bool = False) -> Formula:
    """Swap exists/forall and and/or (and true/false).

    With ``negate_atoms`` every atom is negated as well, and an already
    negated atom loses its negation, so the operation stays an involution.
    """
    f = as_formula(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Not(g) if negate_atoms else g
        if isinstance(g, Not):
            if negate_atoms and isinstance(g.child, Atom):
                return g.child
            return Not(go(g.child))
        if isinstance(g, TrueConst):
            return FALSE
        if isinstance(g, FalseConst):
            return TRUE
        if isinstance(g, And):
            return Or(tuple(go(c) for c in g.children))
        if isinstance(g, Or):
            return And(tuple(go(c) for c in g.children))
        if isinstance(g, Exists):
            return Forall(g.var, go(g.body))
        if isinstance(g, Forall):
            return Exists(g.var, go(g.body))
        raise TypeError(g)

    return go(f)


def instantiate(
    f: Union[Formula, PrenexSentence],
    universal_value: Optional[int] = None,
    existential_value: Optional[int] = None,
) -> Formula:
    """Delete universal (existential) quantifiers, binding their variables to an element."""
    if universal_value is None and existential_value is None:
        raise ValueError("give at least one of universal_value, existential_value")
    f = as_formula(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, Forall) and universal_value is not None:
            return go(substitute(g.body, {g.var: Const(universal_value)}))
        if isinstance(g, Exists) and existential_value is not None:
            return go(substitute(g.body, {g.var: Const(existential_value)}))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, go(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(c) for c in g.children))
        if isinstance(g, Not):
            return Not(go(g.child))
        return g

    return go(f)


def substitute_atom(f: Formula, target: str, params: tuple[str, ...], body: Formula) -> Formula:
    """Replace every ``target(args)`` atom by ``body[params := args]``.

    Bound variables of ``body`` are renamed apart for each occurrence, so no
    two copies share a bound name and no argument can be captured.
    """
    if len(set(params)) != len(params):
        raise ValueError("gadget parameters must be distinct")
    used = variable_names(f) | variable_names(body)

    def rename_bound(g: Formula) -> Formula:
        if isinstance(g, (Exists, Forall)):
            new = fresh_name(g.var, used)
            used.add(new)
            inner = substitute(g.body, {g.var: new}) if new != g.var else g.body
            return type(g)(new, rename_bound(inner))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(rename_bound(c) for c in g.children))
        if isinstance(g, Not):
            return Not(rename_bound(g.child))
        return g

    # names bound inside the gadget are reserved up front, then handed out
    used -= {g.var for g in subformulas(body) if isinstance(g, (Exists, Forall))} - variable_names(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if g.rel != target:
                return g
            if len(g.args) != len(params):
                raise ArityError(f"relation {target!r} used with {len(g.args)} arguments, gadget takes {len(params)}")
            copy = rename_bound(body)
            return substitute(copy, dict(zip(params, g.args)))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, go(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(c) for c in g.children))
        if isinstance(g, Not):
            return Not(go(g.child))
        return g

    return go(f)
