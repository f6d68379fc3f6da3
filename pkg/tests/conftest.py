import os

import pytest

from nsconst.envelopes import ProblemParams
from nsconst.upper import TruncationConfig, UpperReport, upper_bound

_CACHE_ENV = "NSCONST_TEST_REPORT_CACHE"


@pytest.fixture(scope="session")
def desk_upper():
    """Memoized desk-scale upper-bound reports (cutoff 20, factor 2, order 6).

    The acceptance suite and several invariant tests share these; each row
    costs tens of seconds, so they are computed once per session.
    """
    cache: dict[tuple, UpperReport] = {}

    def get(kind: str, p: int, n: int) -> UpperReport:
        key = (kind, p, n)
        if key not in cache:
            cache[key] = upper_bound(
                kind, ProblemParams(float(p), float(n), 3), TruncationConfig(20.0, 2.0, 6)
            )
        return cache[key]

    return get


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "extended: extended-cutoff runs, hours long (set NSCONST_EXTENDED=1)"
    )


def pytest_collection_modifyitems(config, items):
    if os.environ.get("NSCONST_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="extended rows disabled; set NSCONST_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)
