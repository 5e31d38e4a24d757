import random
import sys

import pytest

from decntt.modword import AdjustStrategy, set_default_strategy

sys.set_int_max_str_digits(0)

CRITERIA = {
    1: "exactness against the schoolbook oracle",
    2: "lambda table reproduction",
    3: "transform round trips",
    4: "small-N oracle equivalence",
    5: "in-place transposition",
    6: "modmul micro-benchmark (Montgomery >= 2x naive)",
    7: "multiply scaling shape and 1e6-digit time",
    8: "primality and prime form",
    9: "adjust-strategy equivalence",
    10: "carry-bound invariant",
}

_outcomes = {}


def pytest_addoption(parser):
    parser.addoption("--adjust-strategy", choices=("cselect", "bitwise"), default="cselect",
                     help="default adjust strategy for the whole run")


def pytest_configure(config):
    set_default_strategy(config.getoption("--adjust-strategy"))


@pytest.fixture(params=list(AdjustStrategy), ids=lambda s: s.cli_name)
def strategy(request):
    return request.param


@pytest.fixture
def rng(request):
    return random.Random(request.node.nodeid)


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    if report.when == "call" or report.failed:
        ok = report.passed or report.skipped
        _outcomes[marker] = _outcomes.get(marker, True) and ok


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        status = "PASS" if _outcomes[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {CRITERIA.get(n, '')}")
