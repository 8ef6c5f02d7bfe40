"""Agreement and scaling benchmarks written as CSV."""
from __future__ import annotations

import csv
import io
import random
import time

from .generator import GeneratorParams, random_instance
from .model import CHAINDP, FPT, TREEDP, check_solution
from .oracle import solve_exhaustive
from .solve import solve

COLUMNS = ["suite", "solver", "m", "l", "d", "k", "trials", "agreements", "max_ms"]

_CLASSES = {TREEDP: GeneratorParams.tree, CHAINDP: GeneratorParams.chain, FPT: GeneratorParams.fpt}

# (solver, m, l, d, k) rows of the scaling suite
SCALING = [
    (TREEDP, 500, 500, 100, 25),
    (CHAINDP, 300, 300, 150, 20),
    (FPT, 60, 4, 8, 8),
]


def _timed(instance, solver):
    start = time.perf_counter()
    sol = solve(instance, solver)
    return sol, (time.perf_counter() - start) * 1000


def dichotomy_rows(trials: int, seed: int) -> list[dict]:
    """Specialized solver vs oracle on small random instances of its class."""
    rows = []
    if trials <= 0:
        return rows
    rng = random.Random(seed)
    for solver, make in _CLASSES.items():
        agree = 0
        worst = 0.0
        maxima = [0, 0, 0, 0]
        for _ in range(trials):
            m = rng.randint(1, 12)
            params = make(m=m, l=rng.randint(1, 6), d=rng.randint(0, 4),
                          k=rng.randint(0, min(6, m)), seed=rng.randrange(2 ** 32))
            inst = random_instance(params)
            sol, ms = _timed(inst, solver)
            ref = solve_exhaustive(inst)
            agree += (sol.feasible, sol.optimum) == (ref.feasible, ref.optimum)
            worst = max(worst, ms)
            dims = (inst.m, len(inst.attributes), len(inst.constraints), inst.k)
            maxima = [max(a, b) for a, b in zip(maxima, dims)]
        rows.append(dict(zip(COLUMNS, ["dichotomy", solver, *maxima, trials, agree, round(worst, 3)])))
    return rows


def scaling_rows(trials: int, seed: int) -> list[dict]:
    """Wall time at sizes far beyond enumeration.

    A run agrees when its committee (if any) passes the independent checker.
    """
    rows = []
    if trials <= 0:
        return rows
    for solver, m, l, d, k in SCALING:
        agree = 0
        worst = 0.0
        for t in range(trials):
            params = _CLASSES[solver](m=m, l=l, d=d, k=k, seed=seed + t,
                                      negation_rate=0.1, unowned_rate=0.0)
            inst = random_instance(params)
            sol, ms = _timed(inst, solver)
            agree += not sol.feasible or check_solution(inst, sol.committee).ok
            worst = max(worst, ms)
        rows.append(dict(zip(COLUMNS, ["scaling", solver, m, l, d, k, trials, agree, round(worst, 3)])))
    return rows


def run_suite(suite: str, trials: int, seed: int) -> list[dict]:
    if suite == "dichotomy":
        return dichotomy_rows(trials, seed)
    if suite == "scaling":
        return scaling_rows(trials, seed)
    raise ValueError(f"unknown suite {suite!r}")


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
