"""Polynomial solver for simple (literal -> literal) constraints.

Preconditions: every candidate has at most one attribute, every attribute
occurs at most twice in the normalized constraints.

Constraints that share attributes form a cluster.  Inside a cluster,
constraints chaining on an identical literal (``x -> y``, ``y -> z``) are
merged into strings ``x1 -> x2 -> ... -> xt``; a string holds iff its false
literals form a prefix, so it has at most ``t + 1`` states, indexed by the
prefix length ``j``.  Strings meet at junction attributes: the last literal
of one string is the negation of the first of another (a directed edge), or
two strings share their first or their last attribute (the vertices are
merged).  Because each attribute occurs at most twice, the strings of a
cluster form a simple path or cycle, which is folded left to right while
tracking the truth value of the current junction attribute.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .constraints import Literal, render
from .model import (
    CHAINDP,
    MINUS_INF,
    CecacError,
    Instance,
    NotApplicable,
    Solution,
    ensure_valid,
    simple_form,
)
from .treedp import combine_root


class DegreeViolation(CecacError):
    pass


def _rank(c):
    return (-c.profit, c.id)


# -- clusters ----------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    constraints: tuple
    attributes: frozenset

    @property
    def key(self) -> str:
        return min(self.attributes)


def cluster_constraints(simple) -> list[Cluster]:
    """Connected components of the shared-attribute relation."""
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s in simple:
        for a in (s.lhs.attribute, s.rhs.attribute):
            parent.setdefault(a, a)
        ra, rb = find(s.lhs.attribute), find(s.rhs.attribute)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = defaultdict(list)
    for s in simple:
        groups[find(s.lhs.attribute)].append(s)
    clusters = []
    for members in groups.values():
        attrs = frozenset(a for s in members for a in (s.lhs.attribute, s.rhs.attribute))
        clusters.append(Cluster(tuple(members), attrs))
    return sorted(clusters, key=lambda c: c.key)


# -- strings and the string graph ---------------------------------------------


@dataclass(frozen=True)
class ImplicationString:
    literals: tuple
    constraints: tuple
    cyclic: bool = False

    @property
    def first(self) -> Literal:
        return self.literals[0]

    @property
    def last(self) -> Literal:
        return self.literals[-1]

    def endpoint(self, end: int) -> Literal:
        return self.literals[0] if end == 0 else self.literals[-1]

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        return " -> ".join(render(x) for x in self.literals)


@dataclass(frozen=True)
class Junction:
    attribute: str
    a: tuple  # (string index, 0 for the first literal, 1 for the last)
    b: tuple
    kind: str  # "edge" (a is the tail) or "merge"


@dataclass
class StringGraph:
    strings: list
    junctions: list
    vertices: list = field(default_factory=list)  # tuples of string indices
    edges: list = field(default_factory=list)     # (tail vertex, head vertex)

    def vertex_of(self, string_index: int) -> int:
        for v, members in enumerate(self.vertices):
            if string_index in members:
                return v
        raise KeyError(string_index)

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def walk(self):
        """Strings in path/cycle order as ``(string index, entry end)``.

        Returns ``(order, cyclic)``.  Consecutive entries share the junction
        attribute at the exit of the first and the entry of the second; for
        a cycle the last exit meets the first entry.
        """
        partner = {}
        for j in self.junctions:
            partner[j.a] = j.b
            partner[j.b] = j.a
        start = None
        for si in range(len(self.strings)):
            for end in (0, 1):
                if (si, end) not in partner:
                    start = (si, end)
                    break
            if start:
                break
        cyclic = start is None
        if cyclic:
            start = (0, 0)
        order = [start]
        exit_ = (start[0], 1 - start[1])
        while exit_ in partner:
            nxt = partner[exit_]
            if nxt == start:
                break
            order.append(nxt)
            exit_ = (nxt[0], 1 - nxt[1])
        if len(order) != len(self.strings):
            raise DegreeViolation("string graph of a cluster is not a simple path or cycle")
        return order, cyclic


def _occurrences(constraints) -> dict:
    occ = defaultdict(int)
    for s in constraints:
        occ[s.lhs.attribute] += 1
        occ[s.rhs.attribute] += 1
    return occ


def build_strings_graph(cluster: Cluster | list) -> StringGraph:
    cons = list(cluster.constraints if isinstance(cluster, Cluster) else cluster)
    for a, n in _occurrences(cons).items():
        if n > 2:
            raise DegreeViolation(f"attribute {a!r} occurs {n} times")
    succ, pred = {}, {}
    for i, s in enumerate(cons):
        for j, t in enumerate(cons):
            if i != j and s.rhs == t.lhs:
                succ[i] = j
                pred[j] = i
    strings = []
    seen = set()

    def chain(start):
        idx = [start]
        seen.add(start)
        while idx[-1] in succ and succ[idx[-1]] not in seen:
            idx.append(succ[idx[-1]])
            seen.add(idx[-1])
        return idx

    for i in range(len(cons)):
        if i not in pred and i not in seen:
            idx = chain(i)
            lits = (cons[idx[0]].lhs,) + tuple(cons[x].rhs for x in idx)
            strings.append(ImplicationString(lits, tuple(cons[x] for x in idx)))
    for i in range(len(cons)):
        if i not in seen:
            idx = chain(i)
            lits = (cons[idx[0]].lhs,) + tuple(cons[x].rhs for x in idx)
            strings.append(ImplicationString(lits, tuple(cons[x] for x in idx), cyclic=True))

    ends = defaultdict(list)
    for si, s in enumerate(strings):
        if s.cyclic:
            continue
        ends[s.first.attribute].append((si, 0))
        ends[s.last.attribute].append((si, 1))
    junctions = []
    for a, places in ends.items():
        if len(places) != 2 or places[0][0] == places[1][0]:
            continue
        p, q = places
        if p[1] != q[1]:
            tail, head = (p, q) if p[1] == 1 else (q, p)
            junctions.append(Junction(a, tail, head, "edge"))
        else:
            junctions.append(Junction(a, p, q, "merge"))

    # vertices: strings glued by merge junctions
    group = list(range(len(strings)))

    def find(x):
        while group[x] != x:
            x = group[x]
        return x

    for j in junctions:
        if j.kind == "merge":
            ra, rb = find(j.a[0]), find(j.b[0])
            group[max(ra, rb)] = min(ra, rb)
    members = defaultdict(list)
    for si in range(len(strings)):
        members[find(si)].append(si)
    vertices = [tuple(v) for _, v in sorted(members.items())]
    graph = StringGraph(strings, junctions, vertices)
    graph.edges = [(graph.vertex_of(j.a[0]), graph.vertex_of(j.b[0]))
                   for j in junctions if j.kind == "edge"]
    for v in range(len(vertices)):
        if graph.degree(v) > 2:
            raise DegreeViolation(f"vertex {v} has degree {graph.degree(v)}")
    return graph


# -- per-string tables ---------------------------------------------------------


def prefix_assignment(s: ImplicationString, j: int):
    """Attribute truth values making exactly the first ``j`` literals false.

    Returns None when the pattern is contradictory (an attribute would have
    to be both true and false).
    """
    truth = {}
    for idx, x in enumerate(s.literals):
        value = (idx >= j) == x.positive
        if truth.setdefault(x.attribute, value) != value:
            return None
    return truth


class PrefixDpTable:
    """V/N/P cells of one string indexed by (candidates chosen, false prefix)."""

    def __init__(self, string, k, cells, assignments, external):
        self.string = string
        self.k = k
        self.cells = cells              # (i, j) -> (value, N ids, P ids)
        self.assignments = assignments  # j -> attribute truth for legal j
        self.external = external

    @property
    def legal(self) -> list:
        return sorted(self.assignments)

    def value(self, i, j):
        cell = self.cells.get((i, j))
        return MINUS_INF if cell is None else cell[0]

    def N(self, i, j):
        cell = self.cells.get((i, j))
        return frozenset() if cell is None else cell[1]

    def P(self, i, j):
        cell = self.cells.get((i, j))
        return frozenset() if cell is None else cell[2]

    def a_plus(self, j) -> set:
        return {a for a, v in self.assignments[j].items() if v and a not in self.external}

    def a_minus(self, j) -> set:
        return {a for a, v in self.assignments[j].items() if not v}


def _owner_map(candidates) -> dict:
    owners = defaultdict(list)
    for c in candidates:
        for a in c.attributes:
            owners[a].append(c)
    for a in owners:
        owners[a].sort(key=_rank)
    return owners


def string_prefix_table(s: ImplicationString, candidates, k: int, external=frozenset()):
    """Prefix table of ``s``.

    ``candidates`` are the candidates that may own attributes of ``s``.
    Attributes in ``external`` take part in the prefix pattern but their
    owners are accounted for by a neighbouring string.
    """
    owners = candidates if isinstance(candidates, dict) else _owner_map(candidates)
    external = frozenset(external)
    cells = {}
    assignments = {}
    for j in range(len(s) + 1):
        truth = prefix_assignment(s, j)
        if truth is None:
            continue
        assignments[j] = truth
        required = sorted(a for a, v in truth.items() if v and a not in external)
        if any(not owners.get(a) for a in required):
            continue
        heads = [owners[a][0] for a in required]
        pool = sorted((c for a in required for c in owners[a][1:]), key=_rank)
        base = sum(c.profit for c in heads)
        n_ids = frozenset(c.id for c in heads)
        acc = base
        for extra in range(0, len(pool) + 1):
            i = len(heads) + extra
            if i > k:
                break
            if extra:
                acc += pool[extra - 1].profit
            cells[(i, j)] = (acc, n_ids, frozenset(c.id for c in pool[:extra]))
    return PrefixDpTable(s, k, cells, assignments, external)


# -- folding ---------------------------------------------------------------------


def _convolve(a: dict, b: dict, k: int) -> dict:
    out = {}
    for i1, (v1, n1, p1) in sorted(a.items()):
        for i2, (v2, n2, p2) in sorted(b.items()):
            i = i1 + i2
            if i > k:
                break
            val = v1 + v2
            cur = out.get(i)
            if cur is None or val > cur[0]:
                out[i] = (val, (n1, n2), (p1, p2))
    return {i: (v, n[0] | n[1], p[0] | p[1]) for i, (v, n, p) in out.items()}


def _max_merge(into: dict, row: dict) -> None:
    for i, cell in row.items():
        cur = into.get(i)
        if cur is None or cell[0] > cur[0]:
            into[i] = cell


def _rows(table: PrefixDpTable, entry_attr: str, exit_attr: str):
    """Per legal j: (entry truth, exit truth, {i: cell})."""
    rows = []
    for j in table.legal:
        row = {i: cell for (i, jj), cell in table.cells.items() if jj == j}
        if row:
            truth = table.assignments[j]
            rows.append((truth[entry_attr], truth[exit_attr], row))
    return rows


def _update(state: dict, rows: list, k: int) -> dict:
    """Extend every partial fold with the next string.

    A state ``(start truth, frontier truth)`` pairs only with string states
    whose entry attribute has the same truth value.  For an edge junction
    this is the familiar rule: the next string fully satisfied needs the
    previous string fully false, otherwise its last literal is true.
    """
    new: dict = {}
    for (st, ft), acc in state.items():
        for t_in, t_out, row in rows:
            if t_in != ft:
                continue
            _max_merge(new.setdefault((st, t_out), {}), _convolve(acc, row, k))
    return new


def cluster_table(cluster: Cluster, owners: dict, k: int) -> dict:
    """Best (value, N, P) per number of chosen candidates for one cluster."""
    graph = build_strings_graph(cluster)
    order, cyclic = graph.walk()
    state: dict = {}
    last = len(order) - 1
    for pos, (si, entry) in enumerate(order):
        s = graph.strings[si]
        entry_attr = s.endpoint(entry).attribute
        exit_attr = s.endpoint(1 - entry).attribute
        external = set()
        if pos > 0:
            external.add(entry_attr)
        if cyclic and pos == last:
            external.add(exit_attr)
        table = string_prefix_table(s, owners, k, external)
        rows = _rows(table, entry_attr, exit_attr)
        if pos == 0:
            for t_in, t_out, row in rows:
                _max_merge(state.setdefault((t_in, t_out), {}), row)
        else:
            state = _update(state, rows, k)
    result: dict = {}
    for (st, ft), row in state.items():
        if cyclic and st != ft:
            continue
        _max_merge(result, row)
    return result


def solve_chain_dp(instance: Instance) -> Solution:
    ensure_valid(instance)
    simple = simple_form(instance)
    if simple is None:
        raise NotApplicable("chain-dp needs simple constraints, |attrs(c)| <= 1 and N(a) <= 2")
    k = instance.k
    clusters = cluster_constraints(simple)
    used = set().union(*(c.attributes for c in clusters)) if clusters else set()
    c_plus = [c for c in instance.candidates if c.attributes & used]
    c_minus = [c for c in instance.candidates if not c.attributes & used]
    owners = _owner_map(c_plus)
    total = {0: (0, frozenset(), frozenset())}
    for cluster in clusters:
        total = _convolve(total, cluster_table(cluster, owners, k), k)
        if not total:
            break
    cells = {(i, len(n)): (v, n, p) for i, (v, n, p) in total.items()}
    profits = {c.id: c.profit for c in instance.candidates}
    best = combine_root(cells, c_minus, k, profits)
    if best is None:
        return Solution(False, None, None, CHAINDP, None)
    value, committee = best
    if value < instance.p:
        return Solution(False, None, None, CHAINDP, value)
    return Solution(True, committee, value, CHAINDP, value)
