"""One test per acceptance criterion; the summary lines are printed by conftest."""

import itertools
import random
from fractions import Fraction

import pytest

from lndlab.algebra import LaurentPoly, Monomial, evaluate
from lndlab.derivations import (
    Derivation,
    NilpotencyCertificate,
    apply,
    homogeneous_components,
    localize_lift,
    nilpotency_index,
    verify_regular,
)
from lndlab.divisors import fiber_solve, pairing, validate_fiber
from lndlab.fixtures import (
    INVOLUTION,
    Relation,
    check_automorphism,
    check_surface_relations,
    load_fixture,
)
from lndlab.picard import PicardElement, intersection_counts, is_positive, is_standard, standard_form
from lndlab.semigroup import Verdict, homogeneous_lnd_obstruction
from lndlab.weights import Weight, induced_weights, leading_form

VARS = ("u", "b", "r")


def random_poly(rng, variables=VARS, terms=4, low=-3, high=3):
    out = LaurentPoly.zero()
    for _ in range(rng.randint(1, terms)):
        mono = Monomial({v: rng.randint(low, high) for v in variables})
        out = out + LaurentPoly.monomial(mono, Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4)))
    return out


def random_derivation(rng, variables=VARS):
    return Derivation({v: random_poly(rng, variables, terms=2, low=-2, high=2) for v in variables})


def enumerate_sums(degrees, target):
    gens = sorted({d for d in degrees if d > 0})
    sums = set()
    for counts in itertools.product(*(range(target // d + 1) for d in gens)):
        total = sum(c * d for c, d in zip(counts, gens))
        if total <= target:
            sums.add(total)
    return sums


@pytest.mark.acceptance(1, "surface relations vanish; perturbed relation leaves residual 2z")
def test_surface_verification():
    fx = load_fixture("surface-S")
    report = check_surface_relations(fx)
    assert report.ok and report.checked == 13
    fx.relations[0] = Relation("1", "u*v", "z*(z + 1)")
    report = check_surface_relations(fx)
    assert len(report.failures) == 1
    label, residual = report.failures[0]
    assert label == "1" and residual == fx.chart.to_chart(evaluate("2*z"))


@pytest.mark.acceptance(2, "involution preserves the relations; wrong-sign map fails")
def test_automorphism():
    fx = load_fixture("surface-S")
    assert check_automorphism(fx, fx.params["involution"], fx.params["involution_chart"]).ok
    assert not check_automorphism(fx, dict(INVOLUTION, u="v")).ok


@pytest.mark.acceptance(3, "induced weight table")
def test_weight_table():
    fx = load_fixture("surface-S")
    assert fx.weights == {"u": Weight(4, 0), "b": Weight(-1, 1)}
    got = induced_weights(fx.chart, fx.weights)
    expected = {
        "z": Weight(3, 1),
        "v": Weight(2, 2),
        "w": Weight(3, 5),
        "x": Weight(1, 7),
        "t": Weight(9, -1),
        "y": Weight(11, -3),
    }
    assert {k: got[k] for k in expected} == expected


@pytest.mark.acceptance(4, "no homogeneous lnd on the graded monomial algebra")
def test_graded_obstruction():
    fx = load_fixture("graded-R")
    report = homogeneous_lnd_obstruction(fx.semigroup)
    assert report.verdict is Verdict.NONEXISTENT
    by_dir = {c.ray.direction: c for c in report.certificates}
    cert = by_dir[(5, -3)]
    assert cert.ray.describe_functional() == "3r+5s"
    assert dict(zip(fx.lattice, cert.degrees)) == {"u": 3, "z": 5, "v": 7, "w": 16, "x": 20, "t": 4, "y": 0}
    assert by_dir[(-5, 7)].ray.describe_functional() == "7r+5s"
    for c in report.certificates:
        sums = enumerate_sums(c.degrees, 21)
        assert 1 not in sums and 2 not in sums
        assert "C1" in c.failed


@pytest.mark.acceptance(5, "chain multiplicities (2,3,4,2,3,2,1), k1/k0 = 3/2")
def test_chain_multiplicities():
    fx = load_fixture("divisor-graph-S")
    chain = fx.params["chain"]
    sol = fiber_solve(fx.graph, chain["fiber_vertices"], chain["boundary"])
    assert sol.dimension == 1
    assert sol.unknowns == ["A0", "A1", "A2", "A3", "A4", "A5", "A6"]
    assert sol.primitive == [[2, 3, 4, 2, 3, 2, 1]]
    assert sol.basis[0]["A1"] / sol.basis[0]["A0"] == Fraction(3, 2)


@pytest.mark.acceptance(6, "F0 and Finf are fibers with B0^2 = -1")
def test_fibers():
    fx = load_fixture("divisor-graph-S")
    F0 = fx.divisors["F0"]
    assert F0 == {"A1": 1, "A3": 1, "A2": 2, "A4": 2, "A5": 2, "A6": 2, "B0": 2}
    forced = [s for s in range(-5, 5) if pairing(F0, {"B0": 1}, fx.graph.with_self_intersection("B0", s)) == 0]
    assert forced == [-1] and fx.graph.self_intersections["B0"] == -1
    assert validate_fiber(fx.graph, F0).ok
    assert validate_fiber(fx.graph, fx.divisors["Finf"]).ok
    assert pairing(F0, F0, fx.graph) == 0


@pytest.mark.acceptance(7, "skew derivation (3,8) regular and nilpotent; (2,8) fails at y")
def test_skew_derivation():
    fx = load_fixture("bundle-skew", m=3, n=8)
    assert verify_regular(fx.derivation, fx.witnesses).ok
    for name, g in fx.chart.generators.items():
        cert = nilpotency_index(fx.derivation, g, 10)
        assert isinstance(cert, NilpotencyCertificate) and cert.index <= 4, name
    bad = load_fixture("bundle-skew", m=2, n=8)
    report = verify_regular(bad.derivation, bad.witnesses)
    assert not report.ok and report.failing_generators[0] in ("y", "x")


@pytest.mark.acceptance(8, "Picard standard form and positivity")
def test_picard():
    fib = load_fixture("fibration-b").fibration
    skew = PicardElement(0, ((0,), (-2,)))
    assert standard_form(skew, fib) == PicardElement(-1, ((0,), (0,)))
    assert not is_positive(skew, fib)
    noskew = PicardElement(0, ((1,), (1,)))
    assert is_standard(noskew, fib) and is_positive(noskew, fib)
    rng = random.Random(8)
    for _ in range(100):
        el = PicardElement(rng.randint(-6, 6), ((rng.randint(-9, 9),), (rng.randint(-9, 9),)))
        std = standard_form(el, fib)
        assert standard_form(std, fib) == std and is_standard(std, fib)
        moved = el.add_fiber_relation(fib, rng.randrange(2), rng.randint(-5, 5))
        assert standard_form(moved, fib) == std
        assert is_positive(moved, fib) == is_positive(el, fib)


@pytest.mark.acceptance(9, "intersection count closed forms")
def test_counts():
    rng = random.Random(9)
    for _ in range(50):
        N = 4 * rng.randint(1, 50)
        r = 4 * rng.randint(0, N // 4)
        t = intersection_counts(N, r)
        assert t.bp_phiq == N
        assert t.b0_phiq == Fraction(N, 2)
        assert t.b0_phiinf == Fraction(N, 4)
        assert t.b0_phi0 == Fraction(N - r, 4)
        assert t.bp_phi0 == Fraction(N - r, 2)
        assert t.bp_phiinf == Fraction(N, 2)
        assert t.deg_p1 == Fraction(N - r, 4)
        assert t.h2_target == Fraction(N - r, 2)
        assert t.deg_q1 == Fraction(N, 4)
        assert t.h4_target == Fraction(N, 2)
        assert t.deg_p1 - t.deg_q1 == -Fraction(r, 4) == t.leading_exponent


@pytest.mark.acceptance(10, "property suites: Leibniz, leading forms, localize_lift, components")
def test_property_suites():
    rng = random.Random(10)
    weights = {v: Weight(rng.randint(-4, 4), rng.randint(-4, 4)) for v in VARS}
    for _ in range(200):
        d, p, q = random_derivation(rng), random_poly(rng), random_poly(rng)
        assert apply(d, p * q) == apply(d, p) * q + p * apply(d, q)
    checked = 0
    while checked < 200:
        w = {v: Weight(rng.randint(-4, 4), rng.randint(-4, 4)) for v in VARS}
        p, q = random_poly(rng), random_poly(rng)
        if p.is_zero() or q.is_zero():
            continue
        assert leading_form(p * q, w) == leading_form(p, w) * leading_form(q, w)
        checked += 1
    for _ in range(50):
        d = Derivation({"x": 0, "y": random_poly(rng, ("x", "y"), low=-4), "z": random_poly(rng, ("x", "y"), low=-4)})
        gens = [LaurentPoly.var(v) for v in ("x", "y", "z")]
        eps, m = localize_lift(d, "x", gens)
        assert apply(eps, LaurentPoly.var("x")).is_zero()
        assert all(apply(eps, g).pole_order("x") == 0 for g in gens)
        probe = random_poly(rng, ("x", "y"))
        assert apply(eps, probe) == LaurentPoly.var("x", m) * apply(d, probe)
    for _ in range(50):
        d = random_derivation(rng)
        total = Derivation({v: LaurentPoly.zero() for v in VARS})
        for _, c in homogeneous_components(d, weights):
            total = total + c
        assert total.images == d.images
