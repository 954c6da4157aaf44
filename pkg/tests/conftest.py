import pytest

from plquant.pipeline import build_pipeline

_CACHE = {}


def get_pipeline(name: str):
    """Pipelines are cached per session; the large decks take tens of seconds."""
    if name not in _CACHE:
        _CACHE[name] = build_pipeline(name)
    return _CACHE[name]


def fresh_pipeline(name: str):
    """A new, uncached pipeline (for timing); it replaces any cached one."""
    p = build_pipeline(name)
    _CACHE[name] = p
    return p


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])


@pytest.fixture
def pipeline():
    return get_pipeline


@pytest.fixture(scope="session")
def sl2():
    return get_pipeline("sl2_standard")


@pytest.fixture(scope="session")
def so22():
    return get_pipeline("so22_drinfeld_jimbo")


@pytest.fixture(scope="session")
def kappa():
    return get_pipeline("kappa_poincare")


@pytest.fixture(scope="session")
def twisted():
    return get_pipeline("kappa_poincare_twisted")


@pytest.fixture(scope="session")
def book():
    return get_pipeline("book_via_sklyanin")


@pytest.fixture(scope="session")
def jordanian():
    return get_pipeline("jordanian_cross_method")
