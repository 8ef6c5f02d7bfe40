import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cecac.chaindp import (
    Cluster,
    DegreeViolation,
    ImplicationString,
    build_strings_graph,
    cluster_constraints,
    cluster_table,
    prefix_assignment,
    solve_chain_dp,
    string_prefix_table,
    _convolve,
    _owner_map,
)
from cecac.constraints import evaluate, lit, neg, normalize_simple, parse_constraint
from cecac.generator import GeneratorParams, random_instance
from cecac.model import MINUS_INF, Candidate, Instance, NotApplicable, check_solution
from cecac.oracle import solve_exhaustive


def simple(*texts):
    return normalize_simple(texts)


def test_clusters():
    cl = cluster_constraints(simple("a1 -> a2", "a3 -> ~a2", "a5 -> a6"))
    assert [sorted(c.attributes) for c in cl] == [["a1", "a2", "a3"], ["a5", "a6"]]
    assert len(cluster_constraints(simple("a -> b"))) == 1
    assert cluster_constraints([]) == []


def test_chain_becomes_one_string():
    g = build_strings_graph(simple("a1 -> a2", "a2 -> a3"))
    assert [str(s) for s in g.strings] == ["a1 -> a2 -> a3"]
    assert len(g.vertices) == 1 and g.edges == []


def test_negated_junction_is_an_edge():
    g = build_strings_graph(simple("a1 -> a2", "~a2 -> a3"))
    assert [str(s) for s in g.strings] == ["a1 -> a2", "~a2 -> a3"]
    assert g.edges == [(0, 1)]


def test_self_negation_is_one_string():
    g = build_strings_graph(simple("a1 -> ~a1"))
    assert [str(s) for s in g.strings] == ["a1 -> ~a1"]
    assert g.walk() == ([(0, 0)], False)


def test_shared_first_attribute_merges_vertices():
    g = build_strings_graph(simple("a1 -> a2", "~a1 -> a3"))
    assert len(g.strings) == 2 and len(g.vertices) == 1
    assert [j.kind for j in g.junctions] == ["merge"]


def test_cycle_of_strings():
    g = build_strings_graph(simple("a1 -> a2", "~a2 -> a3", "~a3 -> ~a1"))
    order, cyclic = g.walk()
    assert cyclic and len(order) == 3
    assert all(g.degree(v) <= 2 for v in range(len(g.vertices)))


def test_two_literal_cycle_is_a_cyclic_string():
    g = build_strings_graph(simple("a1 -> a2", "a2 -> a1"))
    assert len(g.strings) == 1 and g.strings[0].cyclic


def test_degree_violation():
    cons = simple("a -> b", "a -> c", "~a -> d")
    with pytest.raises(DegreeViolation):
        build_strings_graph(Cluster(tuple(cons), frozenset("abcd")))


OWNERS = [Candidate("c1", {"a1"}, 3), Candidate("c2", {"a2"}, 2)]


def test_prefix_table_of_positive_string():
    t = string_prefix_table(ImplicationString((lit("a1"), lit("a2")), ()), OWNERS, 2)
    assert t.legal == [0, 1, 2]
    assert t.value(2, 0) == 5 and t.value(1, 0) is MINUS_INF
    assert t.value(1, 1) == 2 and t.N(1, 1) == {"c2"}
    assert t.value(0, 2) == 0


def test_prefix_table_of_negative_string():
    t = string_prefix_table(ImplicationString((neg("a1"), neg("a2")), ()), OWNERS, 2)
    assert t.value(0, 0) == 0
    assert t.value(1, 1) == 3 and t.N(1, 1) == {"c1"}


def test_unowned_required_attribute():
    t = string_prefix_table(ImplicationString((lit("a9"), lit("a2")), ()), OWNERS, 2)
    assert t.value(1, 0) is MINUS_INF and t.value(2, 0) is MINUS_INF


def test_self_negation_legal_prefixes():
    s = ImplicationString((lit("a1"), neg("a1")), ())
    assert [j for j in range(3) if prefix_assignment(s, j) is not None] == [1]


def test_surplus_owners_are_replaceable():
    owners = [Candidate("x", {"a"}, 5), Candidate("y", {"a"}, 4)]
    t = string_prefix_table(ImplicationString((lit("b"), lit("a")), ()), owners, 2)
    assert t.value(2, 1) == 9 and t.N(2, 1) == {"x"} and t.P(2, 1) == {"y"}


@pytest.mark.parametrize("length", range(1, 6))
def test_prefix_soundness(length):
    attrs = [f"a{i}" for i in range(length)]
    for signs in itertools.product([True, False], repeat=length):
        lits = [lit(a) if s else neg(a) for a, s in zip(attrs, signs)]
        cons = [parse_constraint(f"{'' if x.positive else '~'}{x.attribute} -> "
                                 f"{'' if y.positive else '~'}{y.attribute}")
                for x, y in zip(lits, lits[1:])]
        for bits in itertools.product([False, True], repeat=length):
            truth = dict(zip(attrs, bits))
            falsity = [not evaluate(x, truth) for x in lits]
            prefix = falsity == sorted(falsity, reverse=True)
            sat = all((not evaluate(c.lhs, truth)) or evaluate(c.rhs, truth) for c in cons)
            assert sat == prefix


def test_e1(e1):
    sol = solve_chain_dp(e1)
    assert sol.feasible and sol.committee == {"c3", "c4"} and sol.profit == 9


def test_two_cycle():
    inst = Instance.build([("c1", {"a1"}, 3), ("c2", {"a2"}, 2)], ["a1 -> a2", "a2 -> a1"], k=2, p=5)
    sol = solve_chain_dp(inst)
    assert sol.feasible and sol.committee == {"c1", "c2"} and sol.profit == 5


def test_self_negation_picks_the_free_candidate():
    inst = Instance.build([("c1", {"a1"}, 3), ("c4", (), 4)], ["a1 -> ~a1"], k=1, p=1)
    sol = solve_chain_dp(inst)
    assert sol.feasible and sol.committee == {"c4"}


def test_rejects_out_of_class():
    inst = Instance.build([("c1", {"a"}, 1)], ["a -> b | c"], k=1)
    with pytest.raises(NotApplicable):
        solve_chain_dp(inst)


def _chain_instance(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 10)
    return random_instance(GeneratorParams.chain(m=m, l=rng.randint(1, 6), d=rng.randint(1, 5),
                                                 k=rng.randint(0, min(5, m)), seed=seed))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=150)
def test_agrees_with_oracle(seed):
    inst = _chain_instance(seed)
    a, b = solve_chain_dp(inst), solve_exhaustive(inst)
    assert (a.feasible, a.optimum) == (b.feasible, b.optimum)
    if a.feasible:
        assert check_solution(inst, a.committee).ok


@given(st.integers(0, 10 ** 6))
@settings(max_examples=80)
def test_cluster_order_is_irrelevant(seed):
    inst = _chain_instance(seed)
    clusters = cluster_constraints(normalize_simple(inst.constraints))
    owners = _owner_map(inst.candidates)
    tables = [cluster_table(c, owners, inst.k) for c in clusters]

    def fold(ts):
        acc = {0: (0, frozenset(), frozenset())}
        for t in ts:
            acc = _convolve(acc, t, inst.k)
        return {i: v for i, (v, _, _) in acc.items()}

    assert fold(tables) == fold(list(reversed(tables)))
