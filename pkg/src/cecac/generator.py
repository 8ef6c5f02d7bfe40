"""Seeded random instances that land in a requested structural class."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .constraints import And, Constraint, Literal, Not, Or
from .model import CecacError, Candidate, Instance, top


class InconsistentParams(CecacError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    m: int = 8
    l: int = 4  # number of attributes
    d: int = 2  # target number of constraints
    k: int = 3
    # caps: attributes per candidate, occurrences per attribute, attributes per constraint;
    # None means unbounded
    caps: tuple = (1, 1, None)
    profit_range: tuple = (-3, 10)
    seed: int = 0
    p_mode: str = "near-top"  # or "any"
    unowned_rate: float = 0.1
    negation_rate: float = 0.35

    @classmethod
    def tree(cls, **kw):
        return cls(caps=(1, 1, None), **kw)

    @classmethod
    def chain(cls, **kw):
        return cls(caps=(1, 2, 2), **kw)

    @classmethod
    def fpt(cls, **kw):
        return cls(caps=(3, None, None), **kw)


def _check(params: GeneratorParams) -> None:
    a_cap, n_cap, len_cap = params.caps
    if min(params.m, params.l, params.d, params.k) < 0:
        raise InconsistentParams("m, l, d and k must be non-negative")
    if params.k > params.m:
        raise InconsistentParams(f"k={params.k} exceeds m={params.m}")
    if a_cap is not None and a_cap < 0:
        raise InconsistentParams("attribute cap must be non-negative")
    if n_cap is not None and n_cap < 1:
        raise InconsistentParams("occurrence cap must be at least 1")
    if len_cap is not None and len_cap < 1:
        raise InconsistentParams("constraint length cap must be at least 1")
    lo, hi = params.profit_range
    if lo > hi:
        raise InconsistentParams("empty profit range")
    if not (0 <= params.negation_rate <= 1 and 0 <= params.unowned_rate <= 1):
        raise InconsistentParams("rates must lie in [0, 1]")
    if params.d and params.l == 0:
        raise InconsistentParams("constraints need at least one attribute")


def _random_side(rng: random.Random, literals: list):
    """Random formula over the given literals, each used once."""
    if len(literals) == 1:
        f = literals[0]
    else:
        cut = rng.randint(1, len(literals) - 1)
        op = And if rng.random() < 0.5 else Or
        f = op(_random_side(rng, literals[:cut]), _random_side(rng, literals[cut:]))
    if not isinstance(f, Literal) and rng.random() < 0.15:
        f = Not(f)
    return f


def _constraints(rng: random.Random, params: GeneratorParams, attrs: list) -> list:
    _, n_cap, len_cap = params.caps
    budget = {a: (n_cap if n_cap is not None else 10 ** 9) for a in attrs}
    simple = n_cap is not None and len_cap is not None and len_cap <= 2
    out = []
    for _ in range(params.d):
        open_ = [a for a in attrs if budget[a] > 0]
        if simple:
            # literal -> literal, occasionally over one attribute (a -> ~a)
            if len(open_) >= 2 and rng.random() > 0.1:
                chosen = rng.sample(open_, 2)
            elif any(budget[a] >= 2 for a in open_):
                chosen = [rng.choice([a for a in open_ if budget[a] >= 2])] * 2
            else:
                break
        else:
            if len(open_) < 2:
                break
            max_len = min(len(open_), len_cap or 5, 5)
            if max_len < 2:
                break
            chosen = rng.sample(open_, rng.randint(2, max_len))
        for a in chosen:
            budget[a] -= 1
        lits = [Literal(a, rng.random() >= params.negation_rate) for a in chosen]
        cut = rng.randint(1, len(lits) - 1)
        out.append(Constraint(_random_side(rng, lits[:cut]), _random_side(rng, lits[cut:])))
    return out


def random_instance(params: GeneratorParams) -> Instance:
    _check(params)
    rng = random.Random(params.seed)
    a_cap = params.caps[0]
    attrs = [f"a{i}" for i in range(1, params.l + 1)]
    width = len(str(max(params.m, 1)))
    # cycle through a shuffled attribute order so ownership is spread out
    cover = rng.sample(attrs, len(attrs))
    cands = []
    for i in range(1, params.m + 1):
        most = min(a_cap if a_cap is not None else len(attrs), len(attrs))
        if most == 0 or rng.random() < params.unowned_rate:
            owned = frozenset()
        else:
            first = cover[(i - 1) % len(cover)]
            rest = rng.sample([a for a in attrs if a != first], rng.randint(0, most - 1))
            owned = frozenset([first, *rest])
        cands.append(Candidate(f"c{i:0{width}d}", owned, rng.randint(*params.profit_range)))
    cons = _constraints(rng, params, attrs)
    best = sum(c.profit for c in top(cands, params.k))
    if params.p_mode == "any":
        p = rng.randint(best - 10, best)
    else:
        spread = max(1, (params.profit_range[1] - params.profit_range[0]) * max(1, params.k) // 3)
        p = best - rng.randint(0, spread)
    return Instance(tuple(cands), tuple(attrs), tuple(cons), params.k, p,
                    f"random-{params.seed}")
