"""Polynomial solver for one attribute per candidate and single occurrences.

The constraints are conjoined into one NNF formula whose binary tree is
processed bottom-up.  Every node ``q`` gets a table indexed by ``(i, j)``:
the best profit of choosing ``i`` candidates from ``C(q)`` such that ``q``
holds, ``j`` of them irreplaceable (``N``) and ``i - j`` replaceable
(``P``).  Replaceable candidates may be dropped without falsifying ``q``,
so at the root they compete with the unconstrained candidates ``C-``.
"""
from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass

from .constraints import (
    Constraint,
    FormulaTree,
    Literal,
    TrueFormula,
    attributes_of,
    combine,
    disjunction,
    lit,
    substitute,
)
from .model import (
    MINUS_INF,
    TREEDP,
    Candidate,
    Instance,
    NotApplicable,
    Solution,
    ensure_valid,
    tree_dp_applicable,
)


@dataclass(frozen=True)
class SplitCandidates:
    c_plus: tuple
    c_minus: tuple


class DpTable:
    """Sparse (V, N, P) table of one tree node; absent cells are -inf."""

    def __init__(self, k: int, cells: dict, pool: list, formula=None):
        self.k = k
        self.cells = cells  # (i, j) -> (value, N ids, P ids)
        self.pool = pool    # best candidates of C(q), at most k, sorted
        self.formula = formula

    def value(self, i: int, j: int):
        cell = self.cells.get((i, j))
        return MINUS_INF if cell is None else cell[0]

    def N(self, i: int, j: int) -> frozenset:
        cell = self.cells.get((i, j))
        return frozenset() if cell is None else cell[1]

    def P(self, i: int, j: int) -> frozenset:
        cell = self.cells.get((i, j))
        return frozenset() if cell is None else cell[2]

    def populated(self):
        return sorted(self.cells)

    def __repr__(self):
        body = ", ".join(f"V[{i}][{j}]={v}" for (i, j), (v, _, _) in sorted(self.cells.items()))
        return f"DpTable({body})"


def _fresh_names(base: str, count: int, taken: set) -> list[str]:
    names = []
    for h in range(1, count + 1):
        name = f"{base}^{h}"
        while name in taken:
            name += "'"
        taken.add(name)
        names.append(name)
    return names


def expand_attributes(instance: Instance) -> Instance:
    """Give every shared attribute one private copy per owning candidate.

    ``a`` owned by ``u > 1`` candidates becomes ``a^1 .. a^u``; in the
    constraints ``a`` turns into ``(a^1 | .. | a^u)`` and ``~a`` into
    ``~(a^1 | .. | a^u)``.
    """
    if any(len(c.attributes) > 1 for c in instance.candidates):
        raise NotApplicable("attribute expansion needs at most one attribute per candidate")
    owners = defaultdict(list)
    for c in sorted(instance.candidates, key=lambda c: c.id):
        for a in c.attributes:
            owners[a].append(c.id)
    shared = {a: ids for a, ids in owners.items() if len(ids) > 1}
    if not shared:
        return instance
    taken = set(instance.attributes)
    renamed = {}
    mapping = {}
    new_attrs = []
    for a in instance.attributes:
        if a in shared:
            names = _fresh_names(a, len(shared[a]), taken)
            renamed.update(zip(shared[a], names))
            mapping[a] = disjunction(lit(n) for n in names)
            new_attrs.extend(names)
        else:
            new_attrs.append(a)
    cands = tuple(
        Candidate(c.id, frozenset({renamed[c.id]}), c.profit) if c.id in renamed else c
        for c in instance.candidates
    )
    cons = tuple(Constraint(substitute(r.lhs, mapping), substitute(r.rhs, mapping))
                 for r in instance.constraints)
    return instance.replace(candidates=cands, attributes=new_attrs, constraints=cons)


def split_candidates(instance: Instance) -> SplitCandidates:
    used = set()
    for r in instance.constraints:
        used |= attributes_of(r)
    plus, minus = [], []
    for c in instance.candidates:
        (plus if c.attributes & used else minus).append(c)
    return SplitCandidates(tuple(plus), tuple(minus))


def _rank(c: Candidate):
    return (-c.profit, c.id)


def _merge_pools(a: list, b: list, k: int) -> list:
    out = []
    for c in heapq.merge(a, b, key=_rank):
        if len(out) == k:
            break
        out.append(c)
    return out


def _prefix(pool: list) -> list:
    sums = [0]
    for c in pool:
        sums.append(sums[-1] + c.profit)
    return sums


def _leaf(x: Literal, owners: dict, k: int) -> DpTable:
    owner = owners.get(x.attribute)
    pool = [owner] if owner is not None and k >= 1 else []
    if x.positive:
        if owner is None or k < 1:
            return DpTable(k, {}, pool, x)
        return DpTable(k, {(1, 1): (owner.profit, frozenset({owner.id}), frozenset())}, pool, x)
    return DpTable(k, {(0, 0): (0, frozenset(), frozenset())}, pool, x)


def _and_cells(left: DpTable, right: DpTable, k: int, best: dict) -> None:
    rcells = sorted(right.cells.items())
    for (r, t), (v1, n1, p1) in sorted(left.cells.items()):
        for (r2, t2), (v2, n2, p2) in rcells:
            i = r + r2
            if i > k:
                continue
            val = v1 + v2
            key = (i, t + t2)
            cur = best.get(key)
            if cur is None or val > cur[0]:
                best[key] = (val, (n1, n2), (p1, p2))


def _one_side_cells(side: DpTable, other: DpTable, k: int, best: dict) -> None:
    """``q`` holds through ``side``; any candidates of ``other`` are free fill."""
    sums = _prefix(other.pool)
    for (r, j), (v, n, p) in sorted(side.cells.items()):
        for extra in range(0, min(k - r, len(other.pool)) + 1):
            val = v + sums[extra]
            key = (r + extra, j)
            cur = best.get(key)
            if cur is None or val > cur[0]:
                fill = frozenset(c.id for c in other.pool[:extra])
                best[key] = (val, (n,), (p, fill))


def _materialize(best: dict) -> dict:
    cells = {}
    for key, (val, ns, ps) in best.items():
        n = ns[0] if len(ns) == 1 else ns[0] | ns[1]
        p = ps[0] | ps[1] if len(ps) == 2 else ps[0]
        cells[key] = (val, n, p)
    return cells


def _owners(split: SplitCandidates) -> dict:
    owners = {}
    for c in split.c_plus:
        for a in c.attributes:
            if a in owners:
                raise NotApplicable(f"attribute {a!r} has more than one owner; expand first")
            owners[a] = c
    return owners


def _run(tree: FormulaTree, split: SplitCandidates, k: int, keep: bool) -> list:
    owners = _owners(split)
    seen = Counter(x.attribute for x in tree.leaves())
    repeated = [a for a, n in seen.items() if n > 1 and a in owners]
    if repeated:
        raise NotApplicable(f"attribute {repeated[0]!r} occurs more than once in the formula")
    tables: list = []
    for node in tree.nodes:
        if node.kind == "leaf":
            tables.append(_leaf(node.formula, owners, k))
            continue
        left, right = tables[node.left], tables[node.right]
        if not keep:
            tables[node.left] = tables[node.right] = None
        best: dict = {}
        _and_cells(left, right, k, best)
        if node.kind == "or":
            _one_side_cells(left, right, k, best)
            _one_side_cells(right, left, k, best)
        pool = _merge_pools(left.pool, right.pool, k)
        tables.append(DpTable(k, _materialize(best), pool, node.formula))
    return tables


def build_all_tables(tree: FormulaTree, split: SplitCandidates, k: int) -> list[DpTable]:
    """Tables for every node of ``tree`` in post-order (root last)."""
    return _run(tree, split, k, keep=True)


def build_tables(tree: FormulaTree, split: SplitCandidates, k: int) -> DpTable:
    """Root table of ``tree``; child tables are released once consumed."""
    return _run(tree, split, k, keep=False)[-1]


def combine_root(root_cells: dict, c_minus, k: int, profits: dict):
    """Best k-committee from the root cells plus the free candidates ``C-``.

    Returns ``(profit, committee ids)`` or None if no cell can be completed.
    """
    minus = sorted(c_minus, key=_rank)[:k]
    best = None
    for (i, j), (v, n, p) in sorted(root_cells.items()):
        if j > k:
            continue
        need = k - j
        extra = sorted((Candidate(cid, frozenset(), profits[cid]) for cid in p), key=_rank)
        fill = _merge_pools(extra, minus, need)
        if len(fill) < need:
            continue
        total = sum(profits[cid] for cid in n) + sum(c.profit for c in fill)
        if best is None or total > best[0]:
            best = (total, n | frozenset(c.id for c in fill))
    return best


def solve_tree_dp(instance: Instance) -> Solution:
    ensure_valid(instance)
    if not tree_dp_applicable(instance):
        raise NotApplicable("tree-dp needs |attrs(c)| <= 1 and N(a) <= 1")
    expanded = expand_attributes(instance)
    split = split_candidates(expanded)
    tree = combine(expanded.constraints)
    k = instance.k
    if tree is TrueFormula:
        root_cells = {(0, 0): (0, frozenset(), frozenset())}
    else:
        root_cells = build_tables(tree, split, k).cells
    profits = {c.id: c.profit for c in instance.candidates}
    best = combine_root(root_cells, split.c_minus, k, profits)
    if best is None:
        return Solution(False, None, None, TREEDP, None)
    total, committee = best
    if total < instance.p:
        return Solution(False, None, None, TREEDP, total)
    return Solution(True, committee, total, TREEDP, total)
