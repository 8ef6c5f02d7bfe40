"""Solver dispatch with a post-verification gate."""
from __future__ import annotations

from .chaindp import solve_chain_dp
from .fpt import solve_fpt
from .model import (
    CHAINDP,
    DEFAULT_FPT_CAP,
    FPT,
    ORACLE,
    TREEDP,
    CecacError,
    Instance,
    Solution,
    check_solution,
    classify_instance,
)
from .oracle import solve_exhaustive
from .treedp import solve_tree_dp

AUTO = "auto"


class VerificationFailed(CecacError):
    """A solver returned a committee that does not check out."""


def solve(instance: Instance, solver: str = AUTO, fpt_cap: int = DEFAULT_FPT_CAP) -> Solution:
    """Run ``solver`` (or the cheapest applicable one for ``auto``).

    Raises NotApplicable when an explicitly requested solver's
    preconditions fail.
    """
    if solver == AUTO:
        solver = classify_instance(instance, fpt_cap)[1]
    if solver == TREEDP:
        sol = solve_tree_dp(instance)
    elif solver == CHAINDP:
        sol = solve_chain_dp(instance)
    elif solver == FPT:
        sol = solve_fpt(instance, fpt_cap)
    elif solver == ORACLE:
        sol = solve_exhaustive(instance)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    if sol.feasible:
        verdict = check_solution(instance, sol.committee)
        if not verdict.ok or verdict.profit != sol.profit:
            raise VerificationFailed(f"{solver} returned an invalid committee {sorted(sol.committee)}")
    return sol
