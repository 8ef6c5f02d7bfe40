"""Core domain types, validation, committee evaluation and classification."""
from __future__ import annotations

import functools
import os
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .constraints import (
    IDENT_RE,
    Constraint,
    NotSimple,
    as_constraint,
    compile_constraint,
    constraint_literals,
    holds,
    normalize_simple,
    render_constraint,
)

TREEDP = "treedp"
CHAINDP = "chaindp"
FPT = "fpt"
ORACLE = "oracle"
SOLVERS = (TREEDP, CHAINDP, FPT, ORACLE)

DEFAULT_FPT_CAP = 16


class CecacError(Exception):
    pass


class InvalidInstance(CecacError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(map(str, self.violations)))


class UnknownCandidate(CecacError, KeyError):
    def __init__(self, cid):
        super().__init__(cid)
        self.cid = cid

    def __str__(self):
        return f"unknown candidate id {self.cid!r}"


class NotApplicable(CecacError):
    """The instance violates a solver's structural preconditions."""


@functools.total_ordering
class _MinusInfinity:
    """Absorbing bottom element for profit tables."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf")


MINUS_INF = _MinusInfinity()


@dataclass(frozen=True)
class Candidate:
    id: str
    attributes: frozenset = frozenset()
    profit: int = 0

    def __post_init__(self):
        if not isinstance(self.attributes, frozenset):
            object.__setattr__(self, "attributes", frozenset(self.attributes))

    def __str__(self):
        return f"{self.id}<{','.join(sorted(self.attributes))}>:{self.profit}"


@dataclass(frozen=True)
class Instance:
    candidates: tuple
    attributes: tuple
    constraints: tuple
    k: int
    p: int
    name: str = ""

    @classmethod
    def build(cls, candidates, constraints=(), k=0, p=0, attributes=None, name=""):
        """Convenience constructor.

        ``candidates`` may hold :class:`Candidate` objects or ``(id, attrs,
        profit)`` triples; constraints may be DSL strings.  When
        ``attributes`` is omitted it is inferred from candidates and
        constraints in sorted order.
        """
        cands = tuple(c if isinstance(c, Candidate) else Candidate(c[0], frozenset(c[1]), c[2])
                      for c in candidates)
        cons = tuple(as_constraint(c) for c in constraints)
        if attributes is None:
            seen = set()
            for c in cands:
                seen |= c.attributes
            for c in cons:
                seen |= {x.attribute for x in constraint_literals(c)}
            attributes = sorted(seen)
        return cls(cands, tuple(attributes), cons, k, p, name)

    def replace(self, **changes) -> "Instance":
        data = dict(candidates=self.candidates, attributes=self.attributes,
                    constraints=self.constraints, k=self.k, p=self.p, name=self.name)
        data.update(changes)
        if "constraints" in changes:
            data["constraints"] = tuple(as_constraint(c) for c in data["constraints"])
        data["candidates"] = tuple(data["candidates"])
        data["attributes"] = tuple(data["attributes"])
        return Instance(**data)

    @cached_property
    def by_id(self) -> dict:
        return {c.id: c for c in self.candidates}

    @property
    def m(self) -> int:
        return len(self.candidates)

    def candidate(self, cid: str) -> Candidate:
        try:
            return self.by_id[cid]
        except KeyError:
            raise UnknownCandidate(cid) from None

    @cached_property
    def _compiled(self):
        bit = {a: 1 << i for i, a in enumerate(self.attributes)}
        masks = {}
        for c in self.candidates:
            mask = 0
            for a in c.attributes:
                mask |= bit.get(a, 0)
            masks[c.id] = mask
        checks = [compile_constraint(c, bit) for c in self.constraints]
        return bit, masks, checks


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str = ""

    def __str__(self):
        return f"{self.code}({self.subject!r})" if self.subject else self.code


@dataclass(frozen=True)
class Solution:
    feasible: bool
    committee: frozenset | None
    profit: int | None
    solver: str
    # best profit over all constraint-satisfying k-committees, regardless of p;
    # None when no such committee exists
    optimum: int | None = None

    def __post_init__(self):
        if self.committee is not None and not isinstance(self.committee, frozenset):
            object.__setattr__(self, "committee", frozenset(self.committee))


@dataclass(frozen=True)
class Verdict:
    size_ok: bool
    constraints_ok: bool
    profit_ok: bool
    profit: int
    violated: tuple = ()

    @property
    def ok(self) -> bool:
        return self.size_ok and self.constraints_ok and self.profit_ok


@dataclass(frozen=True)
class ClassDescriptor:
    max_attrs_per_candidate: int
    max_attr_occurrence: int
    max_constraint_length: int

    def as_tuple(self):
        return (self.max_attrs_per_candidate, self.max_attr_occurrence,
                self.max_constraint_length)


def validate_instance(instance: Instance) -> list[Violation]:
    out = []
    if instance.k < 0:
        out.append(Violation("NegativeK", str(instance.k)))
    if instance.k > len(instance.candidates):
        out.append(Violation("KTooLarge", f"k={instance.k} > m={len(instance.candidates)}"))
    declared = set()
    for a in instance.attributes:
        if not isinstance(a, str) or not IDENT_RE.fullmatch(a):
            out.append(Violation("InvalidAttributeName", str(a)))
        if a in declared:
            out.append(Violation("DuplicateAttribute", a))
        declared.add(a)
    ids = set()
    undeclared = []
    for c in instance.candidates:
        if not c.id or any(ch.isspace() for ch in c.id):
            out.append(Violation("InvalidCandidateId", c.id))
        if c.id in ids:
            out.append(Violation("DuplicateCandidate", c.id))
        ids.add(c.id)
        if isinstance(c.profit, bool) or not isinstance(c.profit, int):
            out.append(Violation("NonIntegerProfit", c.id))
        undeclared.extend(a for a in sorted(c.attributes) if a not in declared)
    for r in instance.constraints:
        if r.lhs is None or r.rhs is None:
            out.append(Violation("EmptyConstraintSide"))
            continue
        undeclared.extend(x.attribute for x in constraint_literals(r)
                          if x.attribute not in declared)
    for a in dict.fromkeys(undeclared):
        out.append(Violation("UndeclaredAttribute", a))
    return out


def ensure_valid(instance: Instance) -> None:
    violations = validate_instance(instance)
    if violations:
        raise InvalidInstance(violations)


def _members(instance: Instance, committee: Iterable[str]) -> list[Candidate]:
    return [instance.candidate(cid) for cid in committee]


def induced_assignment(instance: Instance, committee: Iterable[str]) -> dict[str, bool]:
    """Attribute -> True iff some committee member owns it."""
    owned = set()
    for c in _members(instance, committee):
        owned |= c.attributes
    return {a: a in owned for a in instance.attributes}


def profit_of(instance: Instance, committee: Iterable[str]) -> int:
    return sum(c.profit for c in _members(instance, committee))


def check_solution(instance: Instance, committee: Iterable[str]) -> Verdict:
    committee = list(committee)
    truth = induced_assignment(instance, committee)
    violated = tuple(r for r in instance.constraints if not holds(r, truth))
    profit = profit_of(instance, committee)
    return Verdict(
        size_ok=len(set(committee)) == instance.k and len(committee) == instance.k,
        constraints_ok=not violated,
        profit_ok=profit >= instance.p,
        profit=profit,
        violated=violated,
    )


def satisfies_constraints(instance: Instance, committee: Iterable[str]) -> bool:
    """Fast path used by the enumerating solvers."""
    _, masks, checks = instance._compiled
    mask = 0
    for cid in committee:
        mask |= masks[cid]
    return all(chk(mask) for chk in checks)


def literal_occurrences(constraints: Iterable[Constraint]) -> Counter:
    """N(a): number of literal occurrences of ``a`` or ``~a``."""
    n = Counter()
    for r in constraints:
        for x in constraint_literals(r):
            n[x.attribute] += 1
    return n


def constraint_length(r: Constraint) -> int:
    """L(r): number of distinct attributes in the constraint."""
    return len({x.attribute for x in constraint_literals(r)})


def describe(instance: Instance) -> ClassDescriptor:
    occ = literal_occurrences(instance.constraints)
    return ClassDescriptor(
        max((len(c.attributes) for c in instance.candidates), default=0),
        max(occ.values(), default=0),
        max((constraint_length(r) for r in instance.constraints), default=0),
    )


def candidate_type_count(instance: Instance) -> int:
    return len({c.attributes for c in instance.candidates})


def simple_form(instance: Instance):
    """Normalized literal->literal constraints if the instance admits chain-dp.

    Returns None unless every candidate has at most one attribute, all
    constraints normalize, and every attribute occurs at most twice in the
    normalized set.
    """
    if any(len(c.attributes) > 1 for c in instance.candidates):
        return None
    try:
        simple = normalize_simple(instance.constraints)
    except NotSimple:
        return None
    occ = Counter()
    for s in simple:
        occ[s.lhs.attribute] += 1
        occ[s.rhs.attribute] += 1
    if any(v > 2 for v in occ.values()):
        return None
    return simple


def tree_dp_applicable(instance: Instance) -> bool:
    d = describe(instance)
    return d.max_attrs_per_candidate <= 1 and d.max_attr_occurrence <= 1


def classify_instance(instance: Instance, fpt_cap: int = DEFAULT_FPT_CAP):
    """Return the class descriptor and the cheapest applicable solver tag."""
    d = describe(instance)
    if d.max_attrs_per_candidate <= 1 and d.max_attr_occurrence <= 1:
        tag = TREEDP
    elif simple_form(instance) is not None:
        tag = CHAINDP
    elif candidate_type_count(instance) <= fpt_cap:
        tag = FPT
    else:
        tag = ORACLE
    return d, tag


def top(candidates: Iterable[Candidate], j: int) -> list[Candidate]:
    """T_j: the ``j`` most profitable candidates, ties broken by smaller id."""
    return sorted(candidates, key=lambda c: (-c.profit, c.id))[:j]


def render_constraints(instance: Instance) -> list[str]:
    return [render_constraint(r) for r in instance.constraints]


def enum_budget(default: int = 10 ** 8) -> int:
    raw = os.environ.get("CECAC_ENUM_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default
