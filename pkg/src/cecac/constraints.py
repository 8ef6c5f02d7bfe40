"""Constraint language: formula AST, parser, printer, NNF and formula trees.

Grammar (AND binds tighter than OR, ``~`` binds tightest)::

    constraint := expr '->' expr
    expr       := term ('|' term)*
    term       := factor ('&' factor)*
    factor     := '~' factor | '(' expr ')' | IDENT

``~`` applied directly to an identifier produces a negative :class:`Literal`;
applied to anything else it produces a :class:`Not` node.  The printer mirrors
this, so ``parse(render(f)) == f`` holds for every formula.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Union

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_^']*")
_TOKEN_RE = re.compile(r"\s*(?:(->)|([~&|()])|([A-Za-z_][A-Za-z0-9_^']*))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotSimple(ValueError):
    """A constraint cannot be rewritten into literal -> literal form."""


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    attribute: str
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.attribute, not self.positive)


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Literal, Not, And, Or]


@dataclass(frozen=True)
class Constraint:
    lhs: Formula
    rhs: Formula

    def __str__(self) -> str:
        return render_constraint(self)


class _TrueFormula:
    """Empty conjunction; the combined formula of an empty constraint set."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TrueFormula"


TrueFormula = _TrueFormula()


def lit(name: str) -> Literal:
    return Literal(name, True)


def neg(name: str) -> Literal:
    return Literal(name, False)


def disjunction(parts: Iterable[Formula]) -> Formula:
    """Left-associated OR of ``parts`` (must be non-empty)."""
    it = iter(parts)
    acc = next(it)
    for f in it:
        acc = Or(acc, f)
    return acc


def conjunction(parts: Iterable[Formula]) -> Formula:
    it = iter(parts)
    acc = next(it)
    for f in it:
        acc = And(acc, f)
    return acc


# -- parsing -----------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("ARROW", "->", start))
        elif m.group(2):
            tokens.append((m.group(2), m.group(2), start))
        else:
            tokens.append(("IDENT", m.group(3), start))
        pos = m.end()
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise self.error(f"expected {kind!r}")
        return self.take()

    def error(self, what: str) -> ParseError:
        kind, value, pos = self.peek()
        if kind == "EOF":
            return ParseError(f"{what}, found end of input", pos)
        return ParseError(f"{what}, found {value!r}", pos)

    def expr(self) -> Formula:
        node = self.term()
        while self.peek()[0] == "|":
            self.take()
            node = Or(node, self.term())
        return node

    def term(self) -> Formula:
        node = self.factor()
        while self.peek()[0] == "&":
            self.take()
            node = And(node, self.factor())
        return node

    def factor(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "~":
            self.take()
            if self.peek()[0] == "IDENT":
                return Literal(self.take()[1], False)
            return Not(self.factor())
        if kind == "(":
            self.take()
            node = self.expr()
            if self.peek()[0] == "ARROW":
                raise ParseError("nested '->' inside parentheses", self.peek()[2])
            self.expect(")")
            return node
        if kind == "IDENT":
            self.take()
            return Literal(value, True)
        raise self.error("expected attribute, '~' or '('")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "EOF":
        raise p.error("unexpected token")
    return node


def parse_constraint(text: str) -> Constraint:
    """Parse ``lhs -> rhs``; exactly one top-level arrow is accepted."""
    p = _Parser(text)
    if p.peek()[0] == "ARROW":
        raise ParseError("empty left-hand side", p.peek()[2])
    lhs = p.expr()
    if p.peek()[0] != "ARROW":
        raise p.error("expected '->'")
    p.take()
    if p.peek()[0] == "EOF":
        raise ParseError("empty right-hand side, found end of input", p.peek()[2])
    rhs = p.expr()
    if p.peek()[0] == "ARROW":
        raise ParseError("more than one '->'", p.peek()[2])
    if p.peek()[0] != "EOF":
        raise p.error("unexpected token")
    return Constraint(lhs, rhs)


def as_constraint(c: Constraint | str) -> Constraint:
    return parse_constraint(c) if isinstance(c, str) else c


# -- printing ----------------------------------------------------------------


def render(f: Formula) -> str:
    """Fully parenthesized canonical text."""
    if isinstance(f, Literal):
        return f.attribute if f.positive else "~" + f.attribute
    if isinstance(f, Not):
        inner = render(f.child)
        if isinstance(f.child, Literal) and f.child.positive:
            inner = "(" + inner + ")"
        return "~" + inner
    if isinstance(f, And):
        return f"({render(f.left)} & {render(f.right)})"
    if isinstance(f, Or):
        return f"({render(f.left)} | {render(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


def render_constraint(c: Constraint) -> str:
    return f"{render(c.lhs)} -> {render(c.rhs)}"


def render_flat(f: Formula) -> str:
    """Human-oriented printing that drops parentheses of same-operator chains."""

    def go(g, parent):
        if isinstance(g, Literal):
            return g.attribute if g.positive else "~" + g.attribute
        if isinstance(g, Not):
            return "~(" + go(g.child, None) + ")"
        op = "&" if isinstance(g, And) else "|"
        body = f"{go(g.left, type(g))} {op} {go(g.right, type(g))}"
        if parent is None or parent is type(g):
            return body
        return "(" + body + ")"

    return go(f, None)


# -- semantics ---------------------------------------------------------------


def evaluate(f: Formula, truth: Mapping[str, bool] | set | frozenset) -> bool:
    """Evaluate under ``truth``; a set is read as the set of true attributes."""
    if isinstance(truth, (set, frozenset)):
        is_true = truth.__contains__
    else:
        is_true = lambda a: bool(truth.get(a, False))  # noqa: E731

    def ev(g):
        if isinstance(g, Literal):
            return is_true(g.attribute) == g.positive
        if isinstance(g, Not):
            return not ev(g.child)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        return ev(g.left) or ev(g.right)

    return ev(f)


def holds(c: Constraint, truth) -> bool:
    """Implication semantics: the lhs is false or the rhs is true."""
    return (not evaluate(c.lhs, truth)) or evaluate(c.rhs, truth)


def compile_formula(f: Formula, bit: Mapping[str, int]) -> Callable[[int], bool]:
    """Compile to a predicate over an integer bitmask of true attributes.

    Attributes missing from ``bit`` are treated as permanently false.
    """
    if isinstance(f, Literal):
        b = bit.get(f.attribute, 0)
        if f.positive:
            return lambda m: bool(m & b)
        return lambda m: not (m & b)
    if isinstance(f, Not):
        g = compile_formula(f.child, bit)
        return lambda m: not g(m)
    left = compile_formula(f.left, bit)
    right = compile_formula(f.right, bit)
    if isinstance(f, And):
        return lambda m: left(m) and right(m)
    return lambda m: left(m) or right(m)


def compile_constraint(c: Constraint, bit: Mapping[str, int]) -> Callable[[int], bool]:
    lhs = compile_formula(c.lhs, bit)
    rhs = compile_formula(c.rhs, bit)
    return lambda m: (not lhs(m)) or rhs(m)


def literals(f: Formula) -> Iterator[Literal]:
    """Literal occurrences, left to right (a ``Not`` does not flip them)."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Literal):
            yield g
        elif isinstance(g, Not):
            stack.append(g.child)
        else:
            stack.append(g.right)
            stack.append(g.left)


def attributes_of(f: Formula | Constraint) -> set[str]:
    if isinstance(f, Constraint):
        return attributes_of(f.lhs) | attributes_of(f.rhs)
    return {x.attribute for x in literals(f)}


def constraint_literals(c: Constraint) -> list[Literal]:
    return list(literals(c.lhs)) + list(literals(c.rhs))


# -- normal forms ------------------------------------------------------------


def nnf(f: Formula, negated: bool = False) -> Formula:
    """Push negations down to the literals (De Morgan, double negation)."""
    if isinstance(f, Literal):
        return f.negate() if negated else f
    if isinstance(f, Not):
        return nnf(f.child, not negated)
    left = nnf(f.left, negated)
    right = nnf(f.right, negated)
    if isinstance(f, And):
        return Or(left, right) if negated else And(left, right)
    return And(left, right) if negated else Or(left, right)


def to_nnf_formula(c: Constraint) -> Formula:
    """``~lhs | rhs`` in negation normal form."""
    return nnf(Or(Not(c.lhs), c.rhs))


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Literal):
        return True
    if isinstance(f, Not):
        return False
    return is_nnf(f.left) and is_nnf(f.right)


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace every positive occurrence of attribute ``a`` by ``mapping[a]``.

    A negative literal ``~a`` becomes ``Not(mapping[a])``.
    """
    if isinstance(f, Literal):
        if f.attribute not in mapping:
            return f
        g = mapping[f.attribute]
        return g if f.positive else Not(g)
    if isinstance(f, Not):
        return Not(substitute(f.child, mapping))
    return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))


# -- formula tree ------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    formula: Formula
    kind: str  # "and", "or" or "leaf"
    left: int = -1
    right: int = -1


class FormulaTree:
    """Binary tree of an NNF formula, nodes stored in post-order.

    Children always precede their parent, so a single forward pass over
    ``nodes`` is a valid bottom-up traversal.  The root is the last node.
    """

    def __init__(self, root: Formula):
        if not is_nnf(root):
            raise ValueError("formula tree requires an NNF formula")
        self.root = root
        self.nodes: list[TreeNode] = []
        # iterative post-order; long conjunction chains are deep
        stack: list[tuple[Formula, bool]] = [(root, False)]
        built: list[int] = []
        while stack:
            f, expanded = stack.pop()
            if isinstance(f, Literal):
                self.nodes.append(TreeNode(f, "leaf"))
                built.append(len(self.nodes) - 1)
            elif not expanded:
                stack.append((f, True))
                stack.append((f.right, False))
                stack.append((f.left, False))
            else:
                right = built.pop()
                left = built.pop()
                kind = "and" if isinstance(f, And) else "or"
                self.nodes.append(TreeNode(f, kind, left, right))
                built.append(len(self.nodes) - 1)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def root_index(self) -> int:
        return len(self.nodes) - 1

    def leaves(self) -> list[Literal]:
        return [n.formula for n in self.nodes if n.kind == "leaf"]

    def subformulas(self) -> set[Formula]:
        return {n.formula for n in self.nodes}


def combine(constraints: Iterable[Constraint | str], assoc: str = "left"):
    """Conjoin the NNF forms of all constraints into one formula tree.

    ``assoc="left"`` (the default) builds ``((r1 & r2) & r3)``; ``"right"``
    builds ``r1 & (r2 & r3)``.  An empty list yields :data:`TrueFormula`.
    """
    parts = [to_nnf_formula(as_constraint(c)) for c in constraints]
    if not parts:
        return TrueFormula
    if assoc == "left":
        root = conjunction(parts)
    elif assoc == "right":
        root = parts[-1]
        for f in reversed(parts[:-1]):
            root = And(f, root)
    else:
        raise ValueError(f"unknown associativity {assoc!r}")
    return FormulaTree(root)


# -- simple constraints ------------------------------------------------------


@dataclass(frozen=True)
class SimpleConstraint:
    lhs: Literal
    rhs: Literal

    def as_constraint(self) -> Constraint:
        return Constraint(self.lhs, self.rhs)

    def clause(self) -> frozenset[Literal]:
        return frozenset((self.lhs.negate(), self.rhs))

    def __str__(self) -> str:
        return f"{render(self.lhs)} -> {render(self.rhs)}"


def _split_simple(lhs: Formula, rhs: Formula, out: list[SimpleConstraint]) -> None:
    if isinstance(lhs, Or):
        _split_simple(lhs.left, rhs, out)
        _split_simple(lhs.right, rhs, out)
        return
    if isinstance(rhs, And):
        _split_simple(lhs, rhs.left, out)
        _split_simple(lhs, rhs.right, out)
        return
    if isinstance(lhs, Literal) and isinstance(rhs, Literal):
        out.append(SimpleConstraint(lhs, rhs))
        return
    raise NotSimple(f"cannot reduce {render(lhs)} -> {render(rhs)} to literal form")


def normalize_simple(constraints: Iterable[Constraint | str]) -> list[SimpleConstraint]:
    """Rewrite constraints into literal -> literal form.

    ``x | y -> z`` becomes ``{x -> z, y -> z}`` and ``x -> y & z`` becomes
    ``{x -> y, x -> z}``, recursively, after negations are pushed to the
    literals of each side.  Tautologies (``a -> a``) are dropped and clauses
    that repeat an earlier one (including its contrapositive) are skipped.
    """
    out: list[SimpleConstraint] = []
    for c in constraints:
        c = as_constraint(c)
        _split_simple(nnf(c.lhs), nnf(c.rhs), out)
    seen = set()
    result = []
    for s in out:
        if s.lhs == s.rhs:
            continue
        key = s.clause()
        if key in seen:
            continue
        seen.add(key)
        result.append(s)
    return result
