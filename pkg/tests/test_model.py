import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cecac.model import (
    CHAINDP,
    FPT,
    MINUS_INF,
    ORACLE,
    TREEDP,
    Candidate,
    Instance,
    InvalidInstance,
    UnknownCandidate,
    check_solution,
    classify_instance,
    ensure_valid,
    induced_assignment,
    validate_instance,
)


def codes(instance):
    return [v.code for v in validate_instance(instance)]


def test_well_formed_instance_has_no_violations(e1):
    assert validate_instance(e1) == []


def test_k_larger_than_m(e1):
    assert codes(e1.replace(k=5)) == ["KTooLarge"]


def test_undeclared_attribute(e1):
    bad = e1.replace(candidates=list(e1.candidates) + [Candidate("c5", {"zz"}, 1)])
    assert [str(v) for v in validate_instance(bad)] == ["UndeclaredAttribute('zz')"]


def test_other_violations(e1):
    dup = e1.replace(candidates=list(e1.candidates) + [Candidate("c1", (), 0)])
    assert "DuplicateCandidate" in codes(dup)
    assert "NegativeK" in codes(e1.replace(k=-1))
    assert "InvalidAttributeName" in codes(e1.replace(attributes=["a1", "a2", "a3", "a b"]))
    assert "NonIntegerProfit" in codes(e1.replace(candidates=[Candidate("c1", {"a1"}, 1.5)]))
    assert "UndeclaredAttribute" in codes(e1.replace(constraints=["q -> a1"]))
    with pytest.raises(InvalidInstance):
        ensure_valid(e1.replace(k=9))


def test_induced_assignment_examples(e1):
    assert induced_assignment(e1, {"c1", "c2"}) == {"a1": True, "a2": True, "a3": False}
    assert induced_assignment(e1, set()) == dict.fromkeys(e1.attributes, False)
    assert induced_assignment(e1, {"c4"}) == dict.fromkeys(e1.attributes, False)
    with pytest.raises(UnknownCandidate):
        induced_assignment(e1, {"nobody"})


def test_check_solution_examples(e1):
    v = check_solution(e1, {"c3", "c4"})
    assert v.ok and v.profit == 9
    v = check_solution(e1, {"c1", "c3"})
    assert not v.constraints_ok
    assert v.violated == (e1.constraints[0],)
    v = check_solution(e1, {"c2", "c4"})
    assert v.constraints_ok and not v.profit_ok and v.profit == 6
    assert not check_solution(e1, {"c3"}).size_ok


def test_classification_examples(e1, e2):
    d, tag = classify_instance(e1)
    assert d.as_tuple() == (1, 2, 2) and tag == CHAINDP
    d, tag = classify_instance(e2)
    assert d.as_tuple() == (1, 1, 2) and tag == TREEDP
    multi = e2.replace(candidates=list(e2.candidates) + [Candidate("c5", {"a1", "a2"}, 0)])
    d, tag = classify_instance(multi)
    assert d.max_attrs_per_candidate == 2 and tag in (FPT, ORACLE)


def test_classification_falls_back_to_oracle_past_the_type_cap():
    cands = [Candidate(f"c{i}", {f"a{i}", f"b{i}"}, i) for i in range(20)]
    inst = Instance.build(cands, ["a1 -> a2", "a2 -> a3"], k=2)
    assert classify_instance(inst)[1] == ORACLE
    assert classify_instance(inst, fpt_cap=32)[1] == FPT


def test_minus_infinity_absorbs():
    assert MINUS_INF + 5 is MINUS_INF
    assert 5 + MINUS_INF is MINUS_INF
    assert MINUS_INF < -10 ** 30
    assert max(MINUS_INF, -3) == -3


def _instance(draw_seed):
    rng = random.Random(draw_seed)
    attrs = ["a1", "a2", "a3", "a4"]
    cands = [Candidate(f"c{i}", frozenset(rng.sample(attrs, rng.randint(0, 2))),
                       rng.randint(-5, 9)) for i in range(6)]
    cons = [f"{rng.choice(attrs)} -> ~{rng.choice(attrs)}", f"{rng.choice(attrs)} | {rng.choice(attrs)} -> {rng.choice(attrs)}"]
    return Instance.build(cands, cons, k=3, p=0, attributes=attrs), rng


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100)
def test_induced_assignment_is_monotone(seed):
    inst, rng = _instance(seed)
    ids = [c.id for c in inst.candidates]
    small = set(rng.sample(ids, 2))
    big = small | set(rng.sample(ids, 3))
    a, b = induced_assignment(inst, small), induced_assignment(inst, big)
    assert all(b[x] for x in a if a[x])


@given(st.integers(0, 10 ** 6), st.integers(-20, 20))
@settings(max_examples=100)
def test_profit_is_member_sum_and_shifts_by_k_delta(seed, delta):
    inst, rng = _instance(seed)
    committee = rng.sample([c.id for c in inst.candidates], inst.k)
    total = 0
    for c in inst.candidates:
        if c.id in committee:
            total += c.profit
    assert check_solution(inst, committee).profit == total
    shifted = inst.replace(candidates=[Candidate(c.id, c.attributes, c.profit + delta)
                                       for c in inst.candidates])
    assert check_solution(shifted, committee).profit == total + inst.k * delta


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100)
def test_classification_ignores_order(seed):
    inst, rng = _instance(seed)
    cands, cons = list(inst.candidates), list(inst.constraints)
    rng.shuffle(cands)
    cons.reverse()
    assert classify_instance(inst) == classify_instance(inst.replace(candidates=cands,
                                                                     constraints=cons))
