from __future__ import annotations

import contextlib

import pytest

from melonkit.cli import SeriesCache
from melonkit.dfinite import catalog, solve_series
from melonkit.series import LaurentSeries
from melonkit.walkers import Rule, WalkerModel, enumerate_series

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@contextlib.contextmanager
def criterion(n: int, title: str):
    """Record PASS/FAIL for acceptance criterion ``n`` around a test body."""
    try:
        yield
    except BaseException:
        ACCEPTANCE[n] = (False, title)
        raise
    ACCEPTANCE[n] = (True, title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")


@pytest.fixture(scope="session")
def series_cache(request) -> SeriesCache:
    # persists between runs, so the 1000-term enumerations are paid once
    return SeriesCache(request.config.cache.mkdir("melonkit-series"))


@pytest.fixture(scope="session")
def enumerated(series_cache):
    def get(rule: str, p: int, N: int) -> LaurentSeries:
        model = WalkerModel(p, Rule.parse(rule))
        recipe = {"kind": "enumerate", "rule": model.rule.value, "p": p, "N": N}
        return series_cache.get_or_build(recipe, lambda: enumerate_series(model, N))

    return get


@pytest.fixture(scope="session")
def v3_2000() -> LaurentSeries:
    return solve_series(catalog("V3_ODE"), (), 2000)


@pytest.fixture(scope="session")
def v3(v3_2000):
    return lambda N: v3_2000.truncate(N)


@pytest.fixture(scope="session")
def f3(v3):
    # friendly 3-watermelons through the reciprocal of V3 (checked against enumeration to n=500)
    return lambda N: (LaurentSeries.from_poly((2, -2)) - v3(N).inv()).truncate(N)
