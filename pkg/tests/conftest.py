from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ncs4.algebra import AlgebraElement, MultiIndex, T
from ncs4.geometry import Perturbation
from ncs4.localization import LocalElement
from ncs4.scalars import GaussianRational, QScalar

settings.register_profile("ncs4", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ncs4")

small_frac = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gaussian = st.builds(GaussianRational, small_frac, small_frac)
qscalar = st.dictionaries(st.integers(-2, 2), gaussian, max_size=2).map(QScalar)


@st.composite
def multi_index(draw, max_degree=4):
    eps = draw(st.integers(0, 1))
    budget = max_degree - eps
    parts = []
    for _ in range(4):
        x = draw(st.integers(0, max(budget, 0)))
        parts.append(x)
        budget -= x
    return MultiIndex(*parts, eps)


def elements(max_degree=4, max_terms=4):
    return st.dictionaries(multi_index(max_degree), qscalar, max_size=max_terms).map(AlgebraElement)


@st.composite
def central_elements(draw, max_degree=2):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        i1 = draw(st.integers(0, max_degree))
        i2 = draw(st.integers(0, max_degree))
        e = draw(st.integers(0, 1))
        terms[MultiIndex(i1, i1, i2, i2, e)] = draw(qscalar)
    return AlgebraElement(terms)


@st.composite
def local_elements(draw, max_degree=3, max_den=2):
    num = draw(elements(max_degree, 3))
    den = tuple(draw(st.integers(0, max_den)) for _ in range(4))
    return LocalElement(num, den)


DELTA_SET = [Perturbation.one_plus_t2(n) for n in range(3)]


def formal(lam) -> Perturbation:
    return Perturbation.formal_unit(LocalElement(T * T - 1) * (Fraction(lam) / 2))


@pytest.fixture(params=range(3), ids=["delta=1", "delta=1+T^2", "delta=(1+T^2)^2"])
def pert(request):
    return DELTA_SET[request.param]


# acceptance criteria report ---------------------------------------------------

_CRITERIA_INFO = {}
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): numbered acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _CRITERIA_INFO[item.nodeid] = m.args


def pytest_runtest_logreport(report):
    info = _CRITERIA_INFO.get(report.nodeid)
    if info is None:
        return
    # a failed setup never reaches the call phase
    if report.when == "call" or report.outcome != "passed":
        n, text = info
        _CRITERIA[n] = (report.outcome == "passed", text, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, text, secs = _CRITERIA[n]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'} criterion {n}: {text} ({secs:.2f} s)")
