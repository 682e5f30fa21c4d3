import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LONG = os.environ.get("POLARSET_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set POLARSET_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


# -- acceptance criteria: one summary line each ----------------------------------------

CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key, title = mark.args
    if call.when == "setup" and call.excinfo is not None and call.excinfo.errisinstance(pytest.skip.Exception):
        CRITERIA[(key, item.name)] = (title, "SKIP", None)
    elif call.when == "call":
        outcome = "PASS" if call.excinfo is None else "FAIL"
        CRITERIA[(key, item.name)] = (title, outcome, call.duration)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (key, _), (title, outcome, secs) in sorted(CRITERIA.items(), key=lambda kv: (float(kv[0][0].rstrip("b")), kv[0][0])):
        t = f"{secs:8.2f}s" if secs is not None else "         "
        tr.write_line(f"criterion {key:<4} {outcome:<4} {t}  {title}")
