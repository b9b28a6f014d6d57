import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from rdlab import FreeGroup, GraphProduct, WeightedAbelianGroup  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Z = WeightedAbelianGroup((1,))
F2 = FreeGroup(2)
PENTAGON = GraphProduct.build(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], [Z] * 5)
# path u - v - w on vertices 0 - 1 - 2
PATH = GraphProduct.build(3, [(0, 1), (1, 2)], [Z] * 3)
ZxZ = GraphProduct.direct_product(FreeGroup(1), FreeGroup(1))


@pytest.fixture
def f2():
    return F2


@pytest.fixture
def pentagon():
    return PENTAGON


@pytest.fixture
def path_gp():
    return PATH


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
