"""Solver parameterized by the number of attributes.

Candidates are grouped by attribute set ("type").  For every subset of the
occurring types small enough to fit in a k-committee, the attribute set
made true is fixed, so the constraints can be checked once; the committee
is then one best candidate per chosen type, filled up by profit from the
remaining candidates of those types.
"""
from __future__ import annotations

from itertools import combinations

from .model import (
    DEFAULT_FPT_CAP,
    FPT,
    Instance,
    NotApplicable,
    Solution,
    ensure_valid,
)


class CapExceeded(NotApplicable):
    pass


def _rank(c):
    return (-c.profit, c.id)


def candidate_types(instance: Instance) -> dict:
    """Map each occurring attribute set to its candidates, best first."""
    groups: dict = {}
    for c in instance.candidates:
        groups.setdefault(c.attributes, []).append(c)
    return {t: sorted(cs, key=_rank) for t, cs in groups.items()}


def _type_order(t):
    return (len(t), sorted(t))


def committee_for_types(types: dict, chosen, k: int):
    """Greedy committee using exactly the types in ``chosen``, or None."""
    if len(chosen) > k:
        return None
    heads = [types[t][0] for t in chosen]
    rest = sorted((c for t in chosen for c in types[t][1:]), key=_rank)
    need = k - len(heads)
    if need > len(rest):
        return None
    return heads + rest[:need]


def solve_fpt(instance: Instance, cap: int = DEFAULT_FPT_CAP) -> Solution:
    ensure_valid(instance)
    types = candidate_types(instance)
    if len(types) > cap:
        raise CapExceeded(f"{len(types)} candidate types exceed the cap {cap}")
    order = sorted(types, key=_type_order)
    bit, _, checks = instance._compiled
    tmask = {t: sum(bit[a] for a in t) for t in order}
    k = instance.k
    best = None
    for size in range(0, min(k, len(order)) + 1):
        for chosen in combinations(order, size):
            mask = 0
            for t in chosen:
                mask |= tmask[t]
            if not all(chk(mask) for chk in checks):
                continue
            committee = committee_for_types(types, chosen, k)
            if committee is None:
                continue
            total = sum(c.profit for c in committee)
            if best is None or total > best[0]:
                best = (total, committee)
    if best is None:
        return Solution(False, None, None, FPT, None)
    total, committee = best
    if total < instance.p:
        return Solution(False, None, None, FPT, total)
    return Solution(True, frozenset(c.id for c in committee), total, FPT, total)
