import pytest

from sybilshare import CostFunction

CONSTANT = CostFunction.constant(1.0)
CONCAVE_A = CostFunction.concave([0, 1, 1.5, 1.8, 2.0, 2.1])
CONCAVE_B = CostFunction.concave([0, 1, 1.4, 1.7, 1.9])


@pytest.fixture(params=[CONSTANT, CONCAVE_A, CONCAVE_B], ids=["constant", "concave-a", "concave-b"])
def cost(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
