import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cecac.constraints import Constraint, lit, substitute
from cecac.generator import GeneratorParams, random_instance
from cecac.model import Candidate, Instance, check_solution
from cecac.oracle import BudgetExceeded, enumerate_feasible, solve_exhaustive


def test_e1_optimum(e1):
    sol = solve_exhaustive(e1)
    assert sol.feasible and sol.committee == {"c3", "c4"} and sol.profit == 9


def test_e1_above_the_optimum_is_infeasible(e1):
    sol = solve_exhaustive(e1.replace(p=10))
    assert not sol.feasible and sol.optimum == 9


def test_empty_committee():
    inst = Instance.build([("c1", {"a1"}, 3)], ["a1 -> ~a1"], k=0, p=0)
    sol = solve_exhaustive(inst)
    assert sol.feasible and sol.committee == frozenset() and sol.profit == 0


def test_enumeration_examples(e1):
    assert enumerate_feasible(e1) == (3, 9)
    forced = Instance.build([(f"c{i}", {"a1"}, i) for i in range(3)], ["a1 -> ~a1"], k=1)
    assert enumerate_feasible(forced) == (0, None)
    free = Instance.build([(f"c{i}", (), i) for i in range(4)], [], k=2)
    assert enumerate_feasible(free) == (6, 5)


def test_budget(e1, monkeypatch):
    with pytest.raises(BudgetExceeded):
        solve_exhaustive(e1, budget=5)
    monkeypatch.setenv("CECAC_ENUM_BUDGET", "2")
    with pytest.raises(BudgetExceeded):
        solve_exhaustive(e1)


def test_ties_prefer_smaller_ids():
    inst = Instance.build([("b", (), 1), ("a", (), 1), ("c", (), 1)], [], k=2)
    assert solve_exhaustive(inst).committee == {"a", "b"}


def _random(seed):
    return random_instance(GeneratorParams.fpt(m=7, l=4, d=3, k=3, seed=seed))


@given(st.integers(0, 10 ** 6), st.integers(-7, 7))
@settings(max_examples=60)
def test_profit_shift_covariance(seed, delta):
    inst = _random(seed)
    shifted = inst.replace(candidates=[Candidate(c.id, c.attributes, c.profit + delta)
                                       for c in inst.candidates], p=inst.p + inst.k * delta)
    a, b = solve_exhaustive(inst), solve_exhaustive(shifted)
    assert a.feasible == b.feasible
    assert a.committee == b.committee


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_attribute_renaming_invariance(seed):
    inst = _random(seed)
    names = {a: f"r_{a}" for a in inst.attributes}
    mapping = {a: lit(b) for a, b in names.items()}
    renamed = inst.replace(
        attributes=[names[a] for a in inst.attributes],
        candidates=[Candidate(c.id, {names[a] for a in c.attributes}, c.profit)
                    for c in inst.candidates],
        constraints=[Constraint(substitute(r.lhs, mapping), substitute(r.rhs, mapping))
                     for r in inst.constraints])
    a, b = solve_exhaustive(inst), solve_exhaustive(renamed)
    assert (a.feasible, a.profit, a.committee) == (b.feasible, b.profit, b.committee)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_returned_committees_check_out(seed):
    inst = _random(seed)
    sol = solve_exhaustive(inst)
    if sol.feasible:
        assert check_solution(inst, sol.committee).ok
