import numpy as np
import pytest

from logicbell.state_core import PureState

_criteria: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.append((marker.args[0], marker.args[1], rep.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    merged: dict[str, tuple[str, bool]] = {}
    for cid, text, result in _criteria:
        _, ok = merged.get(cid, (text, True))
        merged[cid] = (text, ok and result == "PASSED")
    for cid in sorted(merged, key=lambda c: int(c.split()[-1])):
        text, ok = merged[cid]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {cid}: {text}")


def random_state(n: int, rng: np.random.Generator) -> PureState:
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return PureState(n, amps)


@pytest.fixture
def rng():
    return np.random.default_rng(20260514)
