"""Brute-force reference solver over all size-k committees."""
from __future__ import annotations

import math
from itertools import combinations

from .model import ORACLE, Instance, NotApplicable, Solution, enum_budget, ensure_valid


class BudgetExceeded(NotApplicable):
    pass


def _check_budget(instance: Instance, budget):
    budget = enum_budget() if budget is None else budget
    total = math.comb(len(instance.candidates), instance.k)
    if total > budget:
        raise BudgetExceeded(f"C({len(instance.candidates)},{instance.k}) = {total} "
                             f"exceeds the enumeration budget {budget}")


def _feasible_committees(instance: Instance):
    """Yield (ids, profit) for every constraint-satisfying k-committee.

    Candidates are enumerated in lexicographic id order, so the first
    maximum seen is the lexicographically smallest id sequence.
    """
    _, masks, checks = instance._compiled
    cands = sorted(instance.candidates, key=lambda c: c.id)
    ids = [c.id for c in cands]
    mk = [masks[i] for i in ids]
    pr = [c.profit for c in cands]
    for combo in combinations(range(len(cands)), instance.k):
        mask = 0
        for i in combo:
            mask |= mk[i]
        if all(chk(mask) for chk in checks):
            yield combo, ids, sum(pr[i] for i in combo)


def solve_exhaustive(instance: Instance, budget: int | None = None) -> Solution:
    ensure_valid(instance)
    _check_budget(instance, budget)
    best = None
    best_combo = ids = None
    for combo, ids, profit in _feasible_committees(instance):
        if best is None or profit > best:
            best, best_combo = profit, combo
    if best is None:
        return Solution(False, None, None, ORACLE, None)
    if best < instance.p:
        return Solution(False, None, None, ORACLE, best)
    return Solution(True, frozenset(ids[i] for i in best_combo), best, ORACLE, best)


def enumerate_feasible(instance: Instance, budget: int | None = None):
    """Count the constraint-satisfying k-committees and their best profit.

    The count ignores the profit bound ``p``; the maximum is None when the
    count is zero.
    """
    ensure_valid(instance)
    _check_budget(instance, budget)
    count = 0
    best = None
    for _, _, profit in _feasible_committees(instance):
        count += 1
        if best is None or profit > best:
            best = profit
    return count, best
