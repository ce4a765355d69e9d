
import pytest
from hypothesis import strategies as st

from lndlab.algebra import LaurentPoly, Monomial

VARS = ("u", "b", "r")

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda q: q != 0)


@st.composite
def monomials(draw, variables=VARS, low=-3, high=3):
    return Monomial({v: draw(st.integers(low, high)) for v in variables})


@st.composite
def laurent_polys(draw, variables=VARS, max_terms=5, low=-3, high=3):
    terms = draw(st.lists(st.tuples(monomials(variables, low, high), coefficients), max_size=max_terms))
    return LaurentPoly(terms)


nonzero_polys = laurent_polys(max_terms=4).filter(lambda p: not p.is_zero())


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, list[str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    number, title = marker
    _, outcomes = _ACCEPTANCE.setdefault(number, (title, []))
    outcomes.append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report.acceptance = (marker.args[0], marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcomes = _ACCEPTANCE[number]
        status = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}")


