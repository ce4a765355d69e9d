"""Dual graphs of SNC curve configurations and their intersection pairing.

Each edge is a transverse intersection (pairing 1); the diagonal holds the
self-intersections, which may be unknown (``None``).  Anything that needs an
unknown self-intersection raises rather than guessing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import format_fraction, to_fraction
from .errors import GraphError
from .linalg import nullspace, primitive_integer


@dataclass(frozen=True)
class CurveGraph:
    self_intersections: dict[str, int | None]
    edges: frozenset[frozenset[str]] = frozenset()

    def __post_init__(self):
        selfs = dict(self.self_intersections)
        edges = set()
        for e in self.edges:
            pair = tuple(e)
            if len(pair) != 2 or pair[0] == pair[1]:
                raise GraphError(f"self-loop or malformed edge {sorted(e)}")
            for v in pair:
                if v not in selfs:
                    raise GraphError(f"edge mentions unknown vertex {v!r}")
            edges.add(frozenset(pair))
        object.__setattr__(self, "self_intersections", selfs)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def build(cls, vertices: Mapping[str, int | None], edges: Iterable[tuple[str, str]]) -> "CurveGraph":
        seen = set()
        for a, b in edges:
            key = frozenset((a, b))
            if key in seen:
                raise GraphError(f"duplicate edge {a}-{b}: multiple intersections are not SNC")
            seen.add(key)
        return cls(dict(vertices), frozenset(frozenset(e) for e in edges))

    @property
    def vertices(self) -> list[str]:
        return list(self.self_intersections)

    def neighbors(self, v: str) -> list[str]:
        out = []
        for e in self.edges:
            if v in e:
                (w,) = e - {v}
                out.append(w)
        order = {name: i for i, name in enumerate(self.self_intersections)}
        return sorted(out, key=order.__getitem__)

    def intersection(self, v: str, w: str) -> int:
        if v not in self.self_intersections or w not in self.self_intersections:
            raise GraphError(f"unknown vertex in pairing: {v!r}, {w!r}")
        if v == w:
            s = self.self_intersections[v]
            if s is None:
                raise GraphError(f"self-intersection of {v} is unknown")
            return s
        return 1 if frozenset((v, w)) in self.edges else 0

    def with_self_intersection(self, v: str, value: int | None) -> "CurveGraph":
        if v not in self.self_intersections:
            raise GraphError(f"unknown vertex {v!r}")
        selfs = dict(self.self_intersections)
        selfs[v] = value
        return CurveGraph(selfs, self.edges)

    def is_connected(self, subset: Iterable[str]) -> bool:
        nodes = set(subset)
        if not nodes:
            return False
        start = next(iter(nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w in nodes and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen == nodes

    def to_json(self) -> dict:
        order = {name: i for i, name in enumerate(self.self_intersections)}
        edges = sorted((sorted(e, key=order.__getitem__) for e in self.edges), key=lambda p: (order[p[0]], order[p[1]]))
        return {
            "vertices": [{"name": v, "self": s} for v, s in self.self_intersections.items()],
            "edges": edges,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CurveGraph":
        try:
            verts = {}
            for item in data["vertices"]:
                name = item["name"]
                if name in verts:
                    raise GraphError(f"duplicate vertex {name!r}")
                s = item.get("self")
                verts[name] = None if s is None else int(s)
            edges = [tuple(e) for e in data.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls.build(verts, edges)


Divisor = dict[str, Fraction]


def make_divisor(coeffs: Mapping[str, object]) -> Divisor:
    return {k: to_fraction(v) for k, v in coeffs.items() if to_fraction(v) != 0}


def divisor_to_json(d: Mapping[str, Fraction]) -> dict[str, str]:
    return {k: format_fraction(Fraction(v)) for k, v in d.items()}


def _check_support(d: Mapping[str, Fraction], graph: CurveGraph) -> None:
    stray = [v for v in d if v not in graph.self_intersections]
    if stray:
        raise GraphError(f"divisor mentions vertices outside the graph: {stray}")


def pairing(d1: Mapping[str, object], d2: Mapping[str, object], graph: CurveGraph) -> Fraction:
    a, b = make_divisor(d1), make_divisor(d2)
    _check_support(a, graph)
    _check_support(b, graph)
    total = Fraction(0)
    for v, x in a.items():
        for w, y in b.items():
            total += x * y * graph.intersection(v, w)
    return total


@dataclass
class FiberSolution:
    unknowns: list[str]
    basis: list[dict[str, Fraction]]
    primitive: list[list[int]]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def fiber_solve(graph: CurveGraph, fiber_vertices: Iterable[str], boundary: Iterable[str] = ()) -> FiberSolution:
    """Kernel of ``G -> ((G, v))_{v in fiber_vertices}``.

    Coefficients are unknowns on the fiber vertices and on the ``boundary``
    vertices (external curves whose coefficient is left free, e.g. the one
    whose self-intersection is unknown).  Only the fiber vertices need known
    self-intersections.  An empty kernel is a result, not an error.
    """
    fiber = list(fiber_vertices)
    bnd = [v for v in boundary if v not in fiber]
    for v in fiber + bnd:
        if v not in graph.self_intersections:
            raise GraphError(f"unknown vertex {v!r}")
    order = {name: i for i, name in enumerate(graph.self_intersections)}
    unknowns = sorted(set(fiber) | set(bnd), key=order.__getitem__)
    rows = [[graph.intersection(v, u) for u in unknowns] for v in fiber]
    basis = nullspace(rows, len(unknowns))
    prim = [primitive_integer(v) for v in basis]
    divisors = [{u: Fraction(c) for u, c in zip(unknowns, vec)} for vec in prim]
    return FiberSolution(unknowns, divisors, prim)


@dataclass
class FiberCheck:
    violations: list[tuple[str, Fraction]] = field(default_factory=list)
    self_pairing: Fraction | None = None
    connected: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and self.self_pairing == 0 and self.connected


def validate_fiber(graph: CurveGraph, F: Mapping[str, object]) -> FiberCheck:
    """A fiber is numerically trivial on its own support and connected."""
    d = make_divisor(F)
    _check_support(d, graph)
    if not d:
        return FiberCheck([], None, False)
    violations = []
    for v in graph.self_intersections:
        if v in d:
            value = pairing(d, {v: 1}, graph)
            if value != 0:
                violations.append((v, value))
    return FiberCheck(violations, pairing(d, d, graph), graph.is_connected(d))


def contract(graph: CurveGraph, v: str) -> CurveGraph:
    """Blow down the (-1)-curve ``v``.

    Neighbors gain +1 self-intersection and pairwise meet.  Two neighbors that
    already meet would end up meeting twice, which leaves the SNC setting, so
    that case is refused.
    """
    s = graph.intersection(v, v)
    if s != -1:
        raise GraphError(f"{v} has self-intersection {s}, not -1")
    nbrs = graph.neighbors(v)
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            if frozenset((a, b)) in graph.edges:
                raise GraphError(f"contracting {v} makes {a} and {b} meet twice")
    selfs = {}
    for w, sw in graph.self_intersections.items():
        if w == v:
            continue
        selfs[w] = sw + 1 if (w in nbrs and sw is not None) else sw
    edges = {e for e in graph.edges if v not in e}
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            edges.add(frozenset((a, b)))
    return CurveGraph(selfs, frozenset(edges))
