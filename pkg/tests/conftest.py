import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from graphmorse import MorseFunction, read_graph  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data_path(name):
    return os.path.normpath(os.path.join(DATA, name))


@pytest.fixture
def k2():
    return read_graph(data_path("k2.graph"))


@pytest.fixture
def k3():
    return read_graph(data_path("k3.graph"))


@pytest.fixture
def two_loops():
    return read_graph(data_path("two_loops.graph"))


@pytest.fixture
def tree8():
    return read_graph(data_path("tree8.graph"))


@pytest.fixture
def k2_f():
    # v1 = 1, v2 = 0, e = 1
    return MorseFunction([1, 0], [1])


@pytest.fixture
def k3_f():
    return MorseFunction([1, 0, 1], [1, 2, 1])


@pytest.fixture
def k3_g():
    return MorseFunction([0, 0, 0], [1, 1, 1])


# acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n, title = marker.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "tests": []})
    if rep.failed:
        entry["ok"] = False
    if rep.when == "call" or rep.failed:
        entry["tests"].append((item.name, "FAIL" if rep.failed else "pass"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        entry = _criteria[n]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {entry['title']}")
        if not entry["ok"]:
            for name, res in entry["tests"]:
                if res == "FAIL":
                    terminalreporter.write_line(f"    failing: {name}")
