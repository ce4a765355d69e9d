"""Built-in objects: the surface S in C^7, its b-chart, the graded ring R-hat,
the boundary divisor graph, and two line bundles over S.

The surface is handled through the chart ``C[u, b, 1/b]`` in which

    z = ub,  v = b(ub - 1),  w = b^3 (ub - 1)^2,  x = b^2 (w - 1),
    t = u^2 / b,  y = (u^2 - b) / b^3,

so every defining relation becomes a Laurent identity in ``(u, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import ChartPresentation, LaurentPoly, evaluate, substitute
from .derivations import Derivation
from .divisors import CurveGraph
from .errors import FixtureError, InvertibilityError
from .picard import FibrationPresentation, PicardElement
from .semigroup import Point, SemigroupPresentation
from .weights import Weight, leading_form

SURFACE_GENERATORS = ("u", "v", "z", "t", "w", "x", "y")

SURFACE_CHART = {
    "u": "u",
    "v": "b*(u*b - 1)",
    "z": "u*b",
    "t": "u^2*b^-1",
    "w": "b^3*(u*b - 1)^2",
    "x": "b^2*(b^3*(u*b - 1)^2 - 1)",
    "y": "(u^2 - b)*b^-3",
}

SURFACE_RELATIONS = [
    ("1", "u*v", "z*(z - 1)"),
    ("2", "v^2*z", "u*w"),
    ("3", "z^2*(w - 1)", "x*u^2"),
    ("4", "u^2*(z - 1)", "t*v"),
    ("5", "(z - 1)^2*(t - 1)", "y*v^2"),
    ("6", "u^2*v^2", "w*t"),
    ("7", "y*z^2", "u^2*(t - 1)"),
    ("8", "x*(z - 1)^2", "v^2*(w - 1)"),
    ("9", "v^4*x", "w^2*(w - 1)"),
    ("10", "u^4*y", "t^2*(t - 1)"),
    ("11", "v^3", "(z - 1)*w"),
    ("12", "u^3", "t*z"),
    ("13", "x*y", "(w - 1)*(t - 1)"),
]

INVOLUTION = {"u": "-v", "v": "-u", "z": "1 - z", "t": "w", "w": "t", "x": "y", "y": "x"}
# the same involution on the chart: b -> 1/b, u -> -v
INVOLUTION_CHART = {"b": "b^-1", "u": "-b*(u*b - 1)"}

SURFACE_WEIGHTS = {"u": Weight(4, 0), "b": Weight(-1, 1)}

GRADED_LATTICE = {
    "u": (1, 0),
    "z": (0, 1),
    "v": (-1, 2),
    "w": (-3, 5),
    "x": (-5, 7),
    "t": (3, -1),
    "y": (5, -3),
}

GRADED_RELATIONS = [
    ("f1.1", "u*v", "z^2"),
    ("f1.2", "v^2*z", "u*w"),
    ("f1.3", "z^2*w", "x*u^2"),
    ("f1.4", "u^2*z", "t*v"),
    ("f2.1", "z^2*t", "y*v^2"),
    ("f2.2", "u^2*v^2", "w*t"),
    ("f2.3", "y*z^2", "u^2*t"),
    ("f2.4", "x*z^2", "v^2*w"),
    ("f5.1", "v^4*x", "w^3"),
    ("f5.2", "u^4*y", "t^3"),
    ("f5.3", "v^3", "z*w"),
    ("f5.4", "u^3", "t*z"),
    ("f5.5", "x*y", "w*t"),
]

# the lattice involution induced by (u, z) -> (u^-1 z^2, z)
GRADED_INVOLUTION = ((-1, 0), (2, 1))

SKEW_RELATIONS = [("t1", "s*u", "r*z"), ("b2", "s*(z - 1)", "r*v")]
NOSKEW_RELATIONS = [("n2", "s*u", "r*v"), ("n3", "s*t", "r*u*(z - 1)"), ("n4", "s*v*z", "r*w")]


def skew_witnesses(m: int, n: int) -> dict[str, str]:
    """Claimed images of the generators under the skew derivation."""
    return {
        "u": f"s^({m})*r^({n - m})",
        "z": f"s^({m + 1})*r^({n - m - 1})",
        "v": f"s^({m + 2})*r^({n - m - 2})",
        "w": f"2*v*s^({m + 3})*r^({n - m - 3})",
        "x": f"2*v*s^({m + 5})*r^({n - m - 5})",
        "t": f"2*u*s^({m - 1})*r^({n - m + 1})",
        "y": f"2*u*s^({m - 3})*r^({n - m + 3})",
        "s": "0",
        "r": "0",
    }


@dataclass(frozen=True)
class Relation:
    label: str
    lhs: str
    rhs: str

    @property
    def poly(self) -> LaurentPoly:
        return evaluate(self.lhs) - evaluate(self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass
class Fixture:
    name: str
    chart: ChartPresentation | None = None
    relations: list[Relation] = field(default_factory=list)
    weights: dict[str, Weight] = field(default_factory=dict)
    lattice: dict[str, Point] = field(default_factory=dict)
    graded_relations: list[Relation] = field(default_factory=list)
    graph: CurveGraph | None = None
    divisors: dict[str, dict[str, Fraction]] = field(default_factory=dict)
    fibration: FibrationPresentation | None = None
    picard_element: PicardElement | None = None
    derivation: Derivation | None = None
    witnesses: dict[str, str] = field(default_factory=dict)
    params: dict[str, object] = field(default_factory=dict)

    @property
    def semigroup(self) -> SemigroupPresentation:
        if not self.lattice:
            raise FixtureError(f"fixture {self.name} has no lattice generators")
        return SemigroupPresentation(tuple(self.lattice.values()))


def _relations(rows) -> list[Relation]:
    return [Relation(*row) for row in rows]


def surface_chart() -> ChartPresentation:
    return ChartPresentation.build(("u", "b"), {"b"}, SURFACE_CHART)


def _surface() -> Fixture:
    return Fixture(
        name="surface-S",
        chart=surface_chart(),
        relations=_relations(SURFACE_RELATIONS),
        weights=dict(SURFACE_WEIGHTS),
        params={"involution": dict(INVOLUTION), "involution_chart": dict(INVOLUTION_CHART)},
    )


def _graded() -> Fixture:
    return Fixture(
        name="graded-R",
        lattice=dict(GRADED_LATTICE),
        graded_relations=_relations(GRADED_RELATIONS),
        params={"involution": GRADED_INVOLUTION},
    )


def divisor_graph() -> CurveGraph:
    selfs: dict[str, int | None] = {"A0": None}
    selfs.update({f"A{i}": -2 for i in range(1, 13)})
    # B0^2 = -1 is forced by (F0, B0) = 0; Binf likewise by symmetry
    selfs.update({"B0": -1, "Binf": -1})
    edges = [
        ("A9", "A8"), ("A8", "A7"), ("A7", "A0"), ("A0", "A1"), ("A1", "A2"), ("A2", "A3"),
        ("A2", "A4"), ("A4", "A5"), ("A5", "A6"),
        ("A8", "A10"), ("A10", "A11"), ("A11", "A12"),
        ("A6", "B0"), ("A12", "Binf"),
    ]
    return CurveGraph.build(selfs, edges)


def _divisor_graph() -> Fixture:
    F0 = {"A1": 1, "A3": 1, "A2": 2, "A4": 2, "A5": 2, "A6": 2, "B0": 2}
    Finf = {"A7": 1, "A9": 1, "A8": 2, "A10": 2, "A11": 2, "A12": 2, "Binf": 2}
    return Fixture(
        name="divisor-graph-S",
        graph=divisor_graph(),
        divisors={k: {v: Fraction(c) for v, c in d.items()} for k, d in (("F0", F0), ("Finf", Finf))},
        params={
            "chain": {"fiber_vertices": ["A1", "A2", "A3", "A4", "A5", "A6"], "boundary": ["A0"]},
        },
    )


def fibration_b() -> FibrationPresentation:
    return FibrationPresentation(((2,), (2,)), (("B0",), ("Binf",)))


def _fibration() -> Fixture:
    return Fixture(name="fibration-b", fibration=fibration_b())


def skew_chart() -> ChartPresentation:
    gens = dict(SURFACE_CHART)
    gens.update({"s": "r*b", "r": "r"})
    return ChartPresentation.build(("u", "b", "r"), {"b"}, gens)


def skew_derivation(m: int, n: int, chart: ChartPresentation | None = None) -> Derivation:
    chart = chart or skew_chart()
    du = LaurentPoly.var("b", m) * LaurentPoly.var("r", n)
    return Derivation.on_chart(chart, {"u": du})


def _bundle_skew(m: int = 3, n: int = 8) -> Fixture:
    if m < 0 or n < 0:
        raise FixtureError("m and n must be nonnegative")
    chart = skew_chart()
    return Fixture(
        name="bundle-skew",
        chart=chart,
        relations=_relations(SURFACE_RELATIONS + SKEW_RELATIONS),
        fibration=fibration_b(),
        # associated divisor C + B0 ~ -2 B_inf
        picard_element=PicardElement(0, ((0,), (-2,))),
        derivation=skew_derivation(m, n, chart),
        witnesses=skew_witnesses(m, n),
        params={"m": m, "n": n, "section_grading": {"u": Weight(0), "b": Weight(0), "r": Weight(1)}},
    )


def _bundle_noskew() -> Fixture:
    gens = dict(SURFACE_CHART)
    gens.update({"s": "r*b*(u*b - 1)*u^-1", "r": "r"})
    chart = ChartPresentation.build(("u", "b", "r"), {"u", "b"}, gens)
    return Fixture(
        name="bundle-noskew",
        chart=chart,
        relations=_relations(SURFACE_RELATIONS + NOSKEW_RELATIONS),
        fibration=fibration_b(),
        # associated divisor B0 + B_inf
        picard_element=PicardElement(0, ((1,), (1,))),
    )


FIXTURES = {
    "surface-S": _surface,
    "graded-R": _graded,
    "divisor-graph-S": _divisor_graph,
    "bundle-skew": _bundle_skew,
    "bundle-noskew": _bundle_noskew,
    "fibration-b": _fibration,
}


def load_fixture(name: str, **params) -> Fixture:
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise FixtureError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def sign_normalized(p: LaurentPoly, order=None) -> LaurentPoly:
    """``p`` or ``-p``, whichever has a positive leading coefficient."""
    return -p if p.leading_sign(order) < 0 else p


@dataclass
class RelationReport:
    failures: list[tuple[str, LaurentPoly]] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_surface_relations(fx: Fixture) -> RelationReport:
    """Every relation must vanish once the chart expressions are substituted.

    Residuals are reported up to sign (leading coefficient positive), since a
    relation and its negative define the same constraint.
    """
    if fx.chart is None:
        raise FixtureError(f"fixture {fx.name} has no chart")
    order = list(fx.chart.ambient_vars)
    report = RelationReport()
    for rel in fx.relations:
        residual = fx.chart.to_chart(rel.poly)
        report.checked += 1
        if not residual.is_zero():
            report.failures.append((rel.label, sign_normalized(residual, order)))
    return report


@dataclass
class AutomorphismReport:
    relation_failures: list[tuple[str, LaurentPoly]] = field(default_factory=list)
    chart_mismatches: list[tuple[str, LaurentPoly]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.relation_failures and not self.chart_mismatches


def check_automorphism(
    fx: Fixture,
    mapping: Mapping[str, str],
    chart_map: Mapping[str, str] | None = None,
) -> AutomorphismReport:
    """Check that a substitution of generators preserves the relations.

    ``mapping`` sends each generator to an expression in the generators.
    Each relation is transformed and pushed into the chart; all must vanish.
    If ``chart_map`` (the same map on chart variables) is given, the two
    descriptions must agree on every generator.
    """
    chart = fx.chart
    if chart is None:
        raise FixtureError(f"fixture {fx.name} has no chart")
    images = {}
    for g in chart.generators:
        expr = mapping.get(g, g)
        p = evaluate(expr)  # negative powers of generators are not allowed
        unknown = p.variables - set(chart.generators)
        if unknown:
            raise FixtureError(f"image of {g} uses unknown generators {sorted(unknown)}")
        images[g] = p
    order = list(chart.ambient_vars)
    report = AutomorphismReport()
    for rel in fx.relations:
        residual = chart.to_chart(substitute(rel.poly, images))
        if not residual.is_zero():
            report.relation_failures.append((rel.label, sign_normalized(residual, order)))
    if chart_map is not None:
        bindings = {v: chart.poly(e) for v, e in chart_map.items()}
        for g, expr in chart.generators.items():
            try:
                moved = substitute(expr, bindings)
            except InvertibilityError as exc:
                raise FixtureError(f"chart map cannot be applied to {g}: {exc}") from exc
            diff = moved - chart.to_chart(images[g])
            if not diff.is_zero():
                report.chart_mismatches.append((g, diff))
    return report


def check_graded_relations(fx: Fixture) -> RelationReport:
    """Graded relations as identities between lattice points."""
    report = RelationReport()
    for rel in fx.graded_relations:
        report.checked += 1
        lhs, rhs = _lattice_point(rel.lhs, fx.lattice), _lattice_point(rel.rhs, fx.lattice)
        if lhs != rhs:
            diff = LaurentPoly.var("u", lhs[0] - rhs[0]) * LaurentPoly.var("z", lhs[1] - rhs[1])
            report.failures.append((rel.label, diff))
    return report


def _lattice_point(expr: str, lattice: Mapping[str, Point]) -> Point:
    p = evaluate(expr)
    if not p.is_monomial():
        raise FixtureError(f"graded relation side {expr!r} is not a monomial")
    ((mono, _),) = p.items()
    r = s = 0
    for var, e in mono.items():
        if var not in lattice:
            raise FixtureError(f"unknown lattice generator {var!r}")
        r += e * lattice[var][0]
        s += e * lattice[var][1]
    return (r, s)


def leading_lattice(chart: ChartPresentation, weights) -> dict[str, Point]:
    """Exponents of the leading monomials of the chart generators, rewritten
    from ``(u, b)`` to ``(u, z)`` coordinates via ``b = z/u``."""
    out = {}
    for name, g in chart.generators.items():
        lead = leading_form(g, weights)
        if not lead.is_monomial():
            raise FixtureError(f"leading form of {name} is not a monomial: {lead}")
        ((mono, _),) = lead.items()
        a, c = mono.degree("u"), mono.degree("b")
        out[name] = (a - c, c)
    return out
