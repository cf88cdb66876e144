"""Records every canonical-mode flatten run and prints the acceptance summary."""
import pytest

import ratrec.flatten as _flatten_mod
from ratrec.recsys import Symbolic

FLATTEN_LOG = []
_original_flatten = _flatten_mod.flatten


def _recording_flatten(sys, init=None, **kw):
    res = _original_flatten(sys, init, **kw)
    if init is None or isinstance(init, Symbolic):
        FLATTEN_LOG.append((sys.k, sys.degree, res.m))
    return res


_flatten_mod.flatten = _recording_flatten

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_collection_modifyitems(items):
    items.sort(key=lambda it: it.get_closest_marker("run_last") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, text = mark.args
    _CRITERIA[n] = (text, rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        text, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
