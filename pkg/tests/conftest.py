
import pytest

from reeb_stab.core import WeightMatrix
from reeb_stab.hilbert import RelationKind, RingSpec, hilbert_ci
from reeb_stab.model import parse_model, shipped_models


CONIFOLD_W = [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, -1]]
CONIFOLD_BETA = (1, 1, 0)


def brieskorn_spec(k: int) -> RingSpec:
    return RingSpec(WeightMatrix(((k, k, k, 2),)), RelationKind.COMPLETE_INTERSECTION, ((2 * k,),), 3)


def flat_spec(dim: int) -> RingSpec:
    return RingSpec(WeightMatrix(tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))))


@pytest.fixture(scope="session")
def models():
    return {name: parse_model(name) for name in shipped_models()}


@pytest.fixture(scope="session")
def conifold(models):
    return models["conifold"]


@pytest.fixture
def conifold_series():
    return hilbert_ci(CONIFOLD_W, [CONIFOLD_BETA])


# --- acceptance reporting --------------------------------------------------

_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    prev = _RESULTS.get(number, (title, True))
    _RESULTS[number] = (title, prev[1] and not rep.failed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok = _RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
