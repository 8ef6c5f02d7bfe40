"""Graph reductions to CECAC and constraint fan-in splitting.

Index bookkeeping is canonical: edges are sorted as ``(min, max)`` pairs
and the edges incident to a vertex are numbered ``1..D`` in that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .constraints import (
    Constraint,
    Literal,
    Or,
    conjunction,
    disjunction,
    evaluate,
    lit,
    neg,
)
from .model import CecacError, Candidate, Instance


class NotRegular(CecacError):
    pass


class MalformedInput(CecacError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple  # sorted (u, v) pairs with u < v

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise MalformedInput(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            if u == v:
                raise MalformedInput(f"self-loop at {u}")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise MalformedInput(f"duplicate edge {e}")
            norm.add(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def incident(self, v: int) -> list[int]:
        """Indices of the edges touching ``v``, in edge order."""
        return [j for j, e in enumerate(self.edges) if v in e]

    def degree(self, v: int) -> int:
        return len(self.incident(v))

    def regular_degree(self):
        """D if every vertex has degree D, else None."""
        degrees = {self.degree(v) for v in self.vertices}
        return degrees.pop() if len(degrees) == 1 else None

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Graph":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 2:
            raise MalformedInput("first line must be 'n m'")
        try:
            n, m = map(int, rows[0])
            edges = [tuple(map(int, r)) for r in rows[1:]]
        except ValueError as exc:
            raise MalformedInput(str(exc)) from None
        if any(len(e) != 2 for e in edges):
            raise MalformedInput("edge lines must be 'u v'")
        if len(edges) != m:
            raise MalformedInput(f"header announces {m} edges, found {len(edges)}")
        return cls(n, tuple(edges))

    @classmethod
    def read(cls, path) -> "Graph":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
        return cls.parse(text)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def has_clique(g: Graph, size: int) -> bool:
    edges = set(g.edges)
    return any(all(e in edges for e in combinations(vs, 2))
               for vs in combinations(g.vertices, size))


def has_independent_set(g: Graph, size: int) -> bool:
    edges = set(g.edges)
    return any(not any(e in edges for e in combinations(vs, 2))
               for vs in combinations(g.vertices, size))


def _require_regular(g: Graph, k_prime: int) -> int:
    if k_prime < 2:
        raise MalformedInput("k' must be at least 2")
    d = g.regular_degree()
    if d is None:
        raise NotRegular("graph is not regular")
    return d


def _slots(g: Graph) -> dict:
    """(vertex, edge index) -> position h in 1..D of the edge at the vertex."""
    return {(v, j): h for v in g.vertices for h, j in enumerate(g.incident(v), start=1)}


def clique_to_cecac_two_attrs(g: Graph, k_prime: int) -> Instance:
    """Candidates with two attributes, every attribute used at most once."""
    D = _require_regular(g, k_prime)
    slot = _slots(g)
    cands, cons, attrs = [], [], []
    for j, (u, v) in enumerate(g.edges):
        x = [f"x{h}_{j}" for h in range(1, 5)]
        attrs += x
        cands.append(Candidate(f"e{j}", frozenset(x[:2]), k_prime + 1))
        cons += [Constraint(lit(x[0]), lit(x[2])), Constraint(lit(x[1]), lit(x[3]))]
    for i in g.vertices:
        attrs += [f"y{h}_{i}" for h in range(D + 1)] + [f"z{h}_{i}" for h in range(D + 1)]
        cons += [Constraint(lit(f"y{h}_{i}"), lit(f"z{h}_{i}")) for h in range(D + 1)]
    for i in g.vertices:
        for j in g.incident(i):
            h = slot[(i, j)]
            # the smaller endpoint carries x3, the larger one x4
            x = f"x3_{j}" if g.edges[j][0] == i else f"x4_{j}"
            cands.append(Candidate(f"c{h}_{i}", frozenset({x, f"y{h}_{i}"}), 0))
    for i in g.vertices:
        for h in range(1, D + 1):
            cands.append(Candidate(f"d{h}_{i}", frozenset({f"z{h}_{i}", f"y0_{i}"}), 0))
    for i in g.vertices:
        cands.append(Candidate(f"g{i}", frozenset({f"z0_{i}"}), -1))
    kk = k_prime * (k_prime - 1) // 2
    return Instance(tuple(cands), tuple(attrs), tuple(cons),
                    5 * kk + k_prime, kk * (k_prime + 1) - k_prime,
                    f"clique2-k{k_prime}")


def clique_to_cecac_single_attr(g: Graph, k_prime: int) -> Instance:
    """One attribute per candidate, every attribute used at most twice."""
    D = _require_regular(g, k_prime)
    slot = _slots(g)
    cands, cons, attrs = [], [], []
    for j, (u, v) in enumerate(g.edges):
        attrs.append(f"y{j}")
        cands.append(Candidate(f"e{j}", frozenset({f"y{j}"}), 1))
        cons += [Constraint(lit(f"y{j}"), lit(f"x{slot[(u, j)]}_{u}")),
                 Constraint(lit(f"y{j}"), lit(f"x{slot[(v, j)]}_{v}"))]
    for i in g.vertices:
        attrs += [f"x{h}_{i}" for h in range(D + 1)]
        for h in range(1, D + 1):
            cands.append(Candidate(f"c{h}_{i}", frozenset({f"x{h}_{i}"}), 0))
        if D:
            cons.append(Constraint(disjunction(lit(f"x{h}_{i}") for h in range(1, D + 1)),
                                   lit(f"x0_{i}")))
    for i in g.vertices:
        cands.append(Candidate(f"c0_{i}", frozenset({f"x0_{i}"}), -1))
    kk = k_prime * (k_prime - 1) // 2
    return Instance(tuple(cands), tuple(attrs), tuple(cons),
                    3 * kk + k_prime, kk - k_prime, f"clique1-k{k_prime}")


def independent_set_to_cecac(g: Graph, k_prime: int) -> Instance:
    """A single constraint: choosing anybody forbids both ends of every edge.

    On an edgeless graph the right-hand side is the empty conjunction; it is
    written as the tautology ``a0 | ~a0`` so the instance keeps one
    constraint.
    """
    if g.n == 0:
        raise MalformedInput("graph has no vertices")
    attrs = [f"a{i}" for i in g.vertices]
    cands = tuple(Candidate(f"v{i}", frozenset({attrs[i]}), 1) for i in g.vertices)
    lhs = disjunction(lit(a) for a in attrs)
    if g.edges:
        rhs = conjunction(Or(neg(attrs[u]), neg(attrs[v])) for u, v in g.edges)
    else:
        rhs = Or(lit(attrs[0]), neg(attrs[0]))
    return Instance(cands, tuple(attrs), (Constraint(lhs, rhs),), k_prime, k_prime,
                    f"indset-k{k_prime}")


# -- witnesses ---------------------------------------------------------------------


def clique_witness_two_attrs(g: Graph, clique) -> list[str]:
    slot = _slots(g)
    clique = set(clique)
    chosen = []
    for j, (u, v) in enumerate(g.edges):
        if u in clique and v in clique:
            chosen.append(f"e{j}")
            for w in (u, v):
                chosen += [f"c{slot[(w, j)]}_{w}", f"d{slot[(w, j)]}_{w}"]
    return chosen + [f"g{i}" for i in sorted(clique)]


def clique_witness_single_attr(g: Graph, clique) -> list[str]:
    slot = _slots(g)
    clique = set(clique)
    chosen = []
    for j, (u, v) in enumerate(g.edges):
        if u in clique and v in clique:
            chosen += [f"e{j}", f"c{slot[(u, j)]}_{u}", f"c{slot[(v, j)]}_{v}"]
    return chosen + [f"c0_{i}" for i in sorted(clique)]


# -- fan-in splitting ---------------------------------------------------------------


def _positive_disjuncts(f) -> list[Literal]:
    if isinstance(f, Or):
        return _positive_disjuncts(f.left) + _positive_disjuncts(f.right)
    if isinstance(f, Literal) and f.positive:
        return [f]
    raise MalformedInput("left-hand side must be a disjunction of positive literals")


def _fresh(counter: list, taken: set) -> str:
    while True:
        name = f"__aux_{counter[0]}"
        counter[0] += 1
        if name not in taken:
            taken.add(name)
            return name


def split_constraint(r: Constraint, mode: str = "fanin2", start: int = 1, taken=()):
    """Rewrite ``x1 | .. | xF -> x0`` with bounded fan-in.

    ``fanin3`` groups the left-hand side pairwise under fresh attributes
    until at most two remain, giving constraints with at most three
    attributes.  ``fanin2`` builds a binary cascade of literal -> literal
    constraints; for ``F == 2`` it is just ``x1 -> x0, x2 -> x0``.

    Returns ``(constraints, fresh attribute names)``.
    """
    if mode not in ("fanin2", "fanin3"):
        raise MalformedInput(f"unknown split mode {mode!r}")
    if not isinstance(r.rhs, Literal):
        raise MalformedInput("right-hand side must be a single literal")
    layer = _positive_disjuncts(r.lhs)
    if len(layer) < 2:
        raise MalformedInput("fan-in must be at least 2")
    counter = [start]
    taken = set(taken) | {x.attribute for x in layer} | {r.rhs.attribute}
    fresh, out = [], []

    def pair_up(items, emit):
        nxt = []
        for a in range(0, len(items) - 1, 2):
            name = _fresh(counter, taken)
            fresh.append(name)
            emit(items[a], items[a + 1], lit(name))
            nxt.append(lit(name))
        if len(items) % 2:
            nxt.append(items[-1])
        return nxt

    if mode == "fanin3":
        while len(layer) > 2:
            layer = pair_up(layer, lambda a, b, t: out.append(Constraint(Or(a, b), t)))
        out.append(Constraint(Or(layer[0], layer[1]), r.rhs))
    elif len(layer) == 2:
        out += [Constraint(layer[0], r.rhs), Constraint(layer[1], r.rhs)]
    else:
        def emit2(a, b, t):
            out.extend((Constraint(a, t), Constraint(b, t)))
        while len(layer) > 1:
            layer = pair_up(layer, emit2)
        out.append(Constraint(layer[0], r.rhs))
    return out, fresh


def forced_fresh_values(constraints, fresh, truth: dict) -> dict:
    """Smallest truth values of the fresh attributes satisfying the carriers.

    A fresh attribute is true iff something feeding it is true, which is
    what a committee adding carriers only where required would induce.
    """
    values = dict(truth)
    for name in fresh:
        values[name] = False
    changed = True
    while changed:
        changed = False
        for r in constraints:
            t = r.rhs
            if isinstance(t, Literal) and t.attribute in fresh and not values[t.attribute]:
                if evaluate(r.lhs, values):
                    values[t.attribute] = True
                    changed = True
    return values
