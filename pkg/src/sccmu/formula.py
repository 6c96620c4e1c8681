"""Modal mu-calculus formulas in negation normal form.

Concrete syntax::

    phi ::= P | !P | phi & phi | phi | phi | <> phi | [] phi
          | mu X. phi | nu X. phi | G phi | F phi | ( phi )

An identifier bound by an enclosing ``mu``/``nu`` is a fixpoint variable,
every other identifier is an atom.  ``G phi`` abbreviates ``nu X. phi & [] X``
and ``F phi`` abbreviates ``mu X. phi | <> X``.  Since ``F`` and ``G`` are
also legal atom names, they are read as operators only when a formula
follows them.  Fixpoint bodies extend as far right as possible; ``&`` binds
tighter than ``|``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .graph import ColoredGraph


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    body: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Formula"


Formula = Union[Var, Atom, NegAtom, And, Or, Diamond, Box, Mu, Nu]
Fixpoint = (Mu, Nu)


def box_star(phi: Formula, var: str = "X") -> Formula:
    return Nu(var, And(phi, Box(Var(var))))


def diamond_star(phi: Formula, var: str = "X") -> Formula:
    return Mu(var, Or(phi, Diamond(Var(var))))


# Parsing

_TOKEN = re.compile(r"\s*(?:(<>)|(\[\])|([A-Za-z_][A-Za-z0-9_']*)|([!&|().]))")
_STARTERS = {"<>", "[]", "!", "("}


def _tokenize(text: str) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(m.lastindex)
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.bound: list = []

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok or 'end of input'!r}", self.pos())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def _starts_formula(self, k: int) -> bool:
        tok = self.peek(k)
        return tok in _STARTERS or bool(re.match(r"[A-Za-z_]", tok))

    def unary(self) -> Formula:
        tok, pos = self.peek(), self.pos()
        if tok == "<>":
            self.take()
            return Diamond(self.unary())
        if tok == "[]":
            self.take()
            return Box(self.unary())
        if tok == "!":
            self.take()
            inner_pos = self.pos()
            inner = self.unary()
            if not isinstance(inner, Atom):
                raise ParseError("negation applies to atoms only", inner_pos)
            return NegAtom(inner.name)
        if tok == "(":
            self.take()
            f = self.disj()
            self.take(")")
            return f
        if tok in ("mu", "nu"):
            self.take()
            var = self.take()
            if not re.match(r"[A-Za-z_]", var or ""):
                raise ParseError("expected a variable name", self.toks[self.i - 1][1])
            self.take(".")
            self.bound.append(var)
            body = self.disj()
            self.bound.pop()
            return (Mu if tok == "mu" else Nu)(var, body)
        if tok in ("G", "F") and tok not in self.bound and self._starts_formula(1):
            self.take()
            body = self.unary()
            return box_star(body) if tok == "G" else diamond_star(body)
        if re.match(r"[A-Za-z_]", tok or ""):
            self.take()
            return Var(tok) if tok in self.bound else Atom(tok)
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    """Parse ``text``; bound variables come back alpha-renamed apart."""
    return alpha_rename(_Parser(text).parse())


# Structural helpers

def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Var):
        return frozenset({f.name})
    if isinstance(f, (Atom, NegAtom)):
        return frozenset()
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Diamond, Box)):
        return free_vars(f.body)
    return free_vars(f.body) - {f.var}


def atoms(f: Formula) -> frozenset:
    if isinstance(f, (Atom, NegAtom)):
        return frozenset({f.name})
    if isinstance(f, Var):
        return frozenset()
    if isinstance(f, (And, Or)):
        return atoms(f.left) | atoms(f.right)
    return atoms(f.body)


def bound_vars(f: Formula) -> list:
    if isinstance(f, (Var, Atom, NegAtom)):
        return []
    if isinstance(f, (And, Or)):
        return bound_vars(f.left) + bound_vars(f.right)
    if isinstance(f, (Diamond, Box)):
        return bound_vars(f.body)
    return [f.var] + bound_vars(f.body)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def alpha_rename(f: Formula) -> Formula:
    """Rename binders so that no two bind the same name and none clashes
    with a free variable or an atom."""
    used = set(free_vars(f)) | set(atoms(f))

    def fresh(name: str) -> str:
        if name not in used:
            used.add(name)
            return name
        base = name.rstrip("0123456789_")
        i = 1
        while f"{base}_{i}" in used:
            i += 1
        used.add(f"{base}_{i}")
        return f"{base}_{i}"

    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, Var):
            return Var(env.get(g.name, g.name))
        if isinstance(g, (Atom, NegAtom)):
            return g
        if isinstance(g, (And, Or)):
            return type(g)(go(g.left, env), go(g.right, env))
        if isinstance(g, (Diamond, Box)):
            return type(g)(go(g.body, env))
        new = fresh(g.var)
        return type(g)(new, go(g.body, {**env, g.var: new}))

    return go(f, {})


def negate(s: Formula) -> Formula:
    """De Morgan dual of a sentence (variables stay, since not-mu X.phi(X) = nu X. not-phi(not-X))."""
    if not is_sentence(s):
        raise FormulaError(f"negate needs a sentence; free variables {sorted(free_vars(s))}")
    return _dual(s)


def _dual(f: Formula) -> Formula:
    if isinstance(f, Var):
        return f
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, And):
        return Or(_dual(f.left), _dual(f.right))
    if isinstance(f, Or):
        return And(_dual(f.left), _dual(f.right))
    if isinstance(f, Diamond):
        return Box(_dual(f.body))
    if isinstance(f, Box):
        return Diamond(_dual(f.body))
    if isinstance(f, Mu):
        return Nu(f.var, _dual(f.body))
    return Mu(f.var, _dual(f.body))


def compose(outer: Formula, atom: str, inner: Formula) -> Formula:
    """Substitute ``inner`` for the atom ``atom`` throughout ``outer``.

    Negated occurrences receive the negation of ``inner``, which must then be
    a sentence.  Raises if a free variable of ``inner`` would be captured.
    """
    fv = free_vars(inner)

    def go(g: Formula, binders: frozenset) -> Formula:
        if isinstance(g, Atom):
            if g.name != atom:
                return g
            if fv & binders:
                raise FormulaError(f"{sorted(fv & binders)} would be captured: inner is not free for {atom}")
            return inner
        if isinstance(g, NegAtom):
            if g.name != atom:
                return g
            if fv:
                raise FormulaError(f"negated occurrence of {atom} needs a sentence to substitute")
            return negate(inner)
        if isinstance(g, Var):
            return g
        if isinstance(g, (And, Or)):
            return type(g)(go(g.left, binders), go(g.right, binders))
        if isinstance(g, (Diamond, Box)):
            return type(g)(go(g.body, binders))
        return type(g)(g.var, go(g.body, binders | {g.var}))

    return alpha_rename(go(outer, frozenset()))


# Pretty printing

_PREC = {Or: 1, And: 2}


def to_text(f: Formula) -> str:
    """Concrete syntax that :func:`parse` reads back to an equal formula."""
    def go(g: Formula, ctx: int) -> str:
        if isinstance(g, (Var, Atom)):
            return g.name
        if isinstance(g, NegAtom):
            return "!" + g.name
        if isinstance(g, (And, Or)):
            p = _PREC[type(g)]
            op = " & " if isinstance(g, And) else " | "
            s = go(g.left, p) + op + go(g.right, p + 1)
            return f"({s})" if p < ctx else s
        if isinstance(g, Diamond):
            return "<>" + go(g.body, 3)
        if isinstance(g, Box):
            return "[]" + go(g.body, 3)
        kw = "mu" if isinstance(g, Mu) else "nu"
        s = f"{kw} {g.var}. {go(g.body, 0)}"
        return f"({s})" if ctx > 0 else s
    return go(f, 0)


# Alternation hierarchy

@dataclass(frozen=True)
class HierarchyLevel:
    kind: str   # "Sigma", "Pi" or "Delta"
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def _levels(f: Formula) -> tuple[int, int]:
    """Least ``(s, p)`` with ``f`` in Sigma_s and in Pi_p, syntactically.

    Boolean and modal connectives are compositions, so levels combine by max.
    At a fixpoint, maximal subformulas that mention none of the variables
    bound inside it are split off as composition arguments; the remaining
    skeleton ``mu X. body`` sits in Sigma_max(1, s(body)) and one level
    higher on the Pi side (dually for ``nu``).
    """
    if isinstance(f, (Var, Atom, NegAtom)):
        return 0, 0
    if isinstance(f, (And, Or)):
        a, b = _levels(f.left), _levels(f.right)
        return max(a[0], b[0]), max(a[1], b[1])
    if isinstance(f, (Diamond, Box)):
        return _levels(f.body)
    inside = set(bound_vars(f))
    parts: list = []
    skeleton = _detach(f.body, inside, parts)
    s, p = _levels(skeleton)
    if isinstance(f, Mu):
        s = max(1, s)
        p = s + 1
    else:
        p = max(1, p)
        s = p + 1
    for part in parts:
        ps, pp = _levels(part)
        s, p = max(s, ps), max(p, pp)
    return s, p


def _detach(f: Formula, inside: set, parts: list) -> Formula:
    if not (free_vars(f) & inside) and _has_fixpoint(f):
        parts.append(f)
        return Atom(f"#{len(parts)}")
    if isinstance(f, (Var, Atom, NegAtom)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(_detach(f.left, inside, parts), _detach(f.right, inside, parts))
    if isinstance(f, (Diamond, Box)):
        return type(f)(_detach(f.body, inside, parts))
    return type(f)(f.var, _detach(f.body, inside, parts))


def _has_fixpoint(f: Formula) -> bool:
    if isinstance(f, Fixpoint):
        return True
    if isinstance(f, (And, Or)):
        return _has_fixpoint(f.left) or _has_fixpoint(f.right)
    if isinstance(f, (Diamond, Box)):
        return _has_fixpoint(f.body)
    return False


def classify(s: Formula) -> HierarchyLevel:
    """Syntactic position of ``s`` in the fixpoint alternation hierarchy.

    This is an upper bound on the semantic level.  Formulas in both
    Sigma_n and Pi_n at the least such ``n`` are reported as Delta_n
    (fixpoint-free formulas are Delta0).
    """
    sig, pi = _levels(s)
    if sig == pi:
        return HierarchyLevel("Delta", sig)
    if sig < pi:
        return HierarchyLevel("Sigma", sig)
    return HierarchyLevel("Pi", pi)


# Semantics

def evaluate(g: ColoredGraph, s: Formula, *, stats: list | None = None) -> frozenset:
    """Vertices of ``g`` satisfying the sentence ``s`` (Knaster-Tarski iteration).

    Least fixpoints iterate upward from the empty set, greatest ones downward
    from all vertices.  Nested fixpoints are recomputed from scratch for each
    outer iterate.  If ``stats`` is given, the number of iterations of every
    fixpoint computation is appended to it.
    """
    if not is_sentence(s):
        raise FormulaError(f"evaluate needs a sentence; free variables {sorted(free_vars(s))}")
    missing = atoms(s) - set(g.predicates)
    if missing:
        raise FormulaError(f"undeclared predicates {sorted(missing)}")
    everything = frozenset(g.vertices)
    holds = {p: frozenset(v for q, v in g.sat if q == p) for p in g.predicates}

    def go(f: Formula, env: dict) -> frozenset:
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, Atom):
            return holds[f.name]
        if isinstance(f, NegAtom):
            return everything - holds[f.name]
        if isinstance(f, And):
            return go(f.left, env) & go(f.right, env)
        if isinstance(f, Or):
            return go(f.left, env) | go(f.right, env)
        if isinstance(f, Diamond):
            inner = go(f.body, env)
            return frozenset(v for v in g.vertices if any(w in inner for w in g.succ[v]))
        if isinstance(f, Box):
            inner = go(f.body, env)
            return frozenset(v for v in g.vertices if all(w in inner for w in g.succ[v]))
        cur = frozenset() if isinstance(f, Mu) else everything
        steps = 0
        while True:
            steps += 1
            nxt = go(f.body, {**env, f.var: cur})
            if nxt == cur:
                break
            cur = nxt
        if stats is not None:
            stats.append(steps)
        return cur

    return go(s, {})


def satisfies(g: ColoredGraph, s: Formula) -> bool:
    return g.point in evaluate(g, s)


def random_formula(rng, atoms_: Iterable[str] = ("F",), depth: int = 4,
                   bound: tuple = ()) -> Formula:
    """Random sentence (when ``bound`` is empty) for property tests."""
    atoms_ = tuple(atoms_)
    if depth <= 0:
        choices = [Atom(a) for a in atoms_] + [NegAtom(a) for a in atoms_] + [Var(x) for x in bound]
        return rng.choice(choices)
    r = rng.random()
    if r < 0.2:
        return random_formula(rng, atoms_, 0, bound)
    if r < 0.4:
        cls = rng.choice((And, Or))
        return cls(random_formula(rng, atoms_, depth - 1, bound),
                   random_formula(rng, atoms_, depth - 1, bound))
    if r < 0.65:
        cls = rng.choice((Diamond, Box))
        return cls(random_formula(rng, atoms_, depth - 1, bound))
    var = f"X{len(bound)}"
    cls = rng.choice((Mu, Nu))
    return cls(var, random_formula(rng, atoms_, depth - 1, bound + (var,)))
