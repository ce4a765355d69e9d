from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lndlab.divisors import CurveGraph, contract, fiber_solve, make_divisor, pairing, validate_fiber
from lndlab.errors import GraphError
from lndlab.fixtures import divisor_graph, load_fixture
from lndlab.linalg import nullspace, primitive_integer, rref

CHAIN = ["A1", "A2", "A3", "A4", "A5", "A6"]


@pytest.fixture(scope="module")
def fx():
    return load_fixture("divisor-graph-S")


# a fully known graph for random tests: the fixture with A0^2 filled in
KNOWN = divisor_graph().with_self_intersection("A0", -3)
coeff = st.fractions(min_value=-4, max_value=4, max_denominator=3)
divisors = st.dictionaries(st.sampled_from(KNOWN.vertices), coeff, max_size=6)


# -- pairing ----------------------------------------------------------------

def test_pairing_chain_end(fx):
    assert pairing({"A6": 1}, {"A5": 2, "A6": 1}, fx.graph) == 0


def test_pairing_diagonal(fx):
    for v, s in fx.graph.self_intersections.items():
        if s is not None:
            assert pairing({v: 1}, {v: 1}, fx.graph) == s


def test_pairing_unknown_self_intersection(fx):
    with pytest.raises(GraphError):
        pairing({"A0": 1}, {"A0": 1}, fx.graph)
    assert pairing({"A0": 1}, {"A1": 1}, fx.graph) == 1


def test_pairing_fiber(fx):
    assert pairing(fx.divisors["F0"], fx.divisors["F0"], fx.graph) == 0
    assert pairing(fx.divisors["F0"], fx.divisors["Finf"], fx.graph) == 0


@given(divisors, divisors)
def test_pairing_symmetric(d1, d2):
    assert pairing(d1, d2, KNOWN) == pairing(d2, d1, KNOWN)


@settings(max_examples=100)
@given(divisors, divisors, divisors, coeff)
def test_pairing_bilinear(d1, d2, d3, a):
    combo = {v: a * d1.get(v, 0) + d2.get(v, 0) for v in set(d1) | set(d2)}
    assert pairing(combo, d3, KNOWN) == a * pairing(d1, d3, KNOWN) + pairing(d2, d3, KNOWN)


# -- fiber_solve --------------------------------------------------------------

def test_chain_multiplicities(fx):
    chain = fx.params["chain"]
    sol = fiber_solve(fx.graph, chain["fiber_vertices"], chain["boundary"])
    assert sol.unknowns == ["A0"] + CHAIN
    assert sol.dimension == 1
    assert sol.primitive == [[2, 3, 4, 2, 3, 2, 1]]
    k = sol.basis[0]
    assert k["A1"] / k["A0"] == Fraction(3, 2)


def test_chain_matches_sympy_nullspace(fx):
    unknowns = ["A0"] + CHAIN
    rows = [[fx.graph.intersection(v, u) for u in unknowns] for v in CHAIN]
    (vec,) = sympy.Matrix(rows).nullspace()
    vec = [sympy.Rational(x) for x in vec]
    scale = sympy.Rational(2) / vec[0]
    assert [int(x * scale) for x in vec] == [2, 3, 4, 2, 3, 2, 1]


def test_chain_with_b0_reproduces_fiber(fx):
    sol = fiber_solve(fx.graph, CHAIN + ["B0"])
    assert sol.dimension == 1
    assert sol.basis[0] == fx.divisors["F0"]


def test_single_zero_vertex():
    g = CurveGraph.build({"C": 0}, [])
    sol = fiber_solve(g, ["C"])
    assert sol.dimension == 1 and sol.basis[0] == {"C": 1}


def test_two_minus_two_vertices():
    g = CurveGraph.build({"C": -2, "D": -2}, [("C", "D")])
    assert fiber_solve(g, ["C", "D"]).dimension == 0


def test_fiber_solve_unknown_vertex(fx):
    with pytest.raises(GraphError):
        fiber_solve(fx.graph, ["nope"])
    with pytest.raises(GraphError):
        fiber_solve(fx.graph, ["A0", "A1"])  # A0^2 unknown


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([v for v in KNOWN.vertices]), min_size=1, max_size=6, unique=True))
def test_fiber_solve_output_is_orthogonal(fiber):
    sol = fiber_solve(KNOWN, fiber)
    for d in sol.basis:
        for v in fiber:
            assert pairing(d, {v: 1}, KNOWN) == 0
    rows = [[KNOWN.intersection(v, u) for u in sol.unknowns] for v in fiber]
    assert sol.dimension == len(sympy.Matrix(rows).nullspace())


# -- validate_fiber -----------------------------------------------------------

def test_fibers_validate(fx):
    for name in ("F0", "Finf"):
        check = validate_fiber(fx.graph, fx.divisors[name])
        assert check.ok, name
        assert check.self_pairing == 0


def test_b0_square_is_forced(fx):
    ok = [s for s in range(-4, 3)
          if pairing(fx.divisors["F0"], {"B0": 1}, fx.graph.with_self_intersection("B0", s)) == 0]
    assert ok == [-1]


def test_wrong_b0_coefficient(fx):
    bad = dict(fx.divisors["F0"], B0=1)
    check = validate_fiber(fx.graph, bad)
    assert not check.ok
    assert [v for v, _ in check.violations] == ["A6", "B0"]


def test_empty_divisor(fx):
    check = validate_fiber(fx.graph, {})
    assert not check.ok and not check.connected


def test_disconnected_divisor_fails():
    g = CurveGraph.build({"C": 0, "D": 0}, [])
    check = validate_fiber(g, {"C": 1, "D": 1})
    assert check.self_pairing == 0 and not check.violations and not check.ok


# -- contract ----------------------------------------------------------------

def test_contract_chain():
    g = CurveGraph.build({"C1": -2, "E": -1, "C2": -2}, [("C1", "E"), ("E", "C2")])
    new = contract(g, "E")
    assert new.self_intersections == {"C1": -1, "C2": -1}
    assert new.intersection("C1", "C2") == 1


def test_contract_isolated():
    g = CurveGraph.build({"E": -1, "C": -3}, [])
    assert contract(g, "E").self_intersections == {"C": -3}


def test_contract_refuses_multi_edge():
    g = CurveGraph.build({"C1": -2, "E": -1, "C2": -2}, [("C1", "E"), ("E", "C2"), ("C1", "C2")])
    with pytest.raises(GraphError):
        contract(g, "E")


def test_contract_needs_minus_one(fx):
    with pytest.raises(GraphError):
        contract(fx.graph, "A1")
    with pytest.raises(GraphError):
        contract(fx.graph, "A0")


def test_contract_fixture_b0(fx):
    new = contract(fx.graph, "B0")
    assert "B0" not in new.self_intersections
    assert new.self_intersections["A6"] == -1


@settings(max_examples=60, deadline=None)
@given(divisors, divisors)
def test_contract_preserves_far_pairings(d1, d2):
    star = {"B0", *KNOWN.neighbors("B0")}
    far1 = {k: v for k, v in d1.items() if k not in star}
    far2 = {k: v for k, v in d2.items() if k not in star}
    new = contract(KNOWN, "B0")
    assert pairing(far1, far2, new) == pairing(far1, far2, KNOWN)


# -- json and linear algebra --------------------------------------------------

def test_graph_json_roundtrip(fx):
    data = fx.graph.to_json()
    assert CurveGraph.from_json(data) == fx.graph
    with pytest.raises(GraphError):
        CurveGraph.from_json({"vertices": [{"name": "a", "self": -1}], "edges": [["a", "a"]]})
    with pytest.raises(GraphError):
        CurveGraph.from_json({"vertices": [{"name": "a"}, {"name": "b"}], "edges": [["a", "b"], ["b", "a"]]})


def test_make_divisor_drops_zeros():
    assert make_divisor({"a": 0, "b": "1/2"}) == {"b": Fraction(1, 2)}


mats = st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=4)


@settings(max_examples=100, deadline=None)
@given(mats)
def test_nullspace_against_sympy(rows):
    basis = nullspace(rows, 4)
    assert len(basis) == len(sympy.Matrix(rows).nullspace())
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in rows)
    m, pivots = rref(rows)
    assert len(pivots) == sympy.Matrix(rows).rank()


def test_primitive_integer():
    assert primitive_integer([Fraction(-1, 2), Fraction(3, 4)]) == [2, -3]
    assert primitive_integer([0, 0]) == [0, 0]
