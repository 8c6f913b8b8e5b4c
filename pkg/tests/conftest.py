import pytest

from charp.cech import TwoChartCover
from charp.elliptic import WeierstrassCurve

# (p, coefficients, supersingular)
CURVES = {
    2: [((0, 0, 1, 0, 0), True), ((0, 0, 1, 1, 0), True), ((1, 0, 0, 0, 1), False), ((1, 0, 0, 1, 0), False)],
    3: [((0, 0, 0, 1, 0), True), ((0, 0, 0, 1, 1), True), ((0, 1, 0, 0, 1), False), ((0, 1, 0, 1, 1), False)],
    5: [((0, 0, 0, 0, 1), True), ((0, 0, 0, 0, 2), True), ((0, 0, 0, 2, 1), False), ((0, 0, 0, 1, 1), False)],
}
DEFAULT = {2: (1, 0, 0, 0, 1), 3: (0, 1, 0, 0, 1), 5: (0, 0, 0, 2, 1)}

_covers = {}


def cover_for(p, coeffs=None):
    coeffs = DEFAULT[p] if coeffs is None else tuple(coeffs)
    key = (p, coeffs)
    if key not in _covers:
        _covers[key] = TwoChartCover(WeierstrassCurve.from_ints(p, coeffs))
    return _covers[key]


@pytest.fixture(params=[2, 3, 5])
def p(request):
    return request.param


# acceptance lines, echoed in the terminal summary so they appear without -s
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
