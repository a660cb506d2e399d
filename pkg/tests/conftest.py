import pytest

from affcell.celldata import descriptors_for, genericity_check, sample_weights
from affcell.coxeter import CoxeterSystem
from affcell.klbasis import KLCache

_CACHES = {}


def kl_cache(kind, weights, radius):
    """Session-wide memo of built caches (building is the slow part)."""
    key = (kind, tuple(weights))
    c = _CACHES.get(key)
    if c is None or c.radius < radius:
        c = KLCache(CoxeterSystem(kind, tuple(weights)), radius).build()
        _CACHES[key] = c
    return c.truncate(radius)


@pytest.fixture(scope="session")
def g2_cache():
    return kl_cache("g2", (5, 2), 10)


@pytest.fixture(scope="session")
def b2_weights():
    return sample_weights("b2", "A1")


@pytest.fixture(scope="session")
def b2_cache(b2_weights):
    return kl_cache("b2", b2_weights, 10)


def table_for(kind, weights, zone=None):
    return descriptors_for(kind, genericity_check(CoxeterSystem(kind, tuple(weights)), zone))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
