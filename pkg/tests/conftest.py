"""Shared fixtures plus a per-criterion summary for the acceptance suite."""

import pytest

from dimerchain import ChainSpec, build_hamiltonian, eigendecompose


@pytest.fixture(scope="session")
def spec_a101():
    return ChainSpec("a", 101, strong=8.0, weak=0.2)


@pytest.fixture(scope="session")
def spectrum_a101(spec_a101):
    return eigendecompose(build_hamiltonian(spec_a101))


@pytest.fixture(scope="session")
def spec_b101():
    return ChainSpec("b", 101, strong=8.0, weak=0.2)


@pytest.fixture(scope="session")
def spectrum_b101(spec_b101):
    return eigendecompose(build_hamiltonian(spec_b101))


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(n): acceptance criterion id, used for the end-of-run summary",
    )


_results: dict[int, list[tuple[str, str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.passed:
        status = "PASS"
    elif report.skipped and hasattr(report, "wasxfail"):
        status = "FAIL (expected; documented defect, see notes/decisions.md)"
    elif report.skipped:
        status = "SKIP"
    else:
        status = "FAIL"
    _results.setdefault(marker.args[0], []).append((item.name, status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_results):
        for name, status in _results[n]:
            terminalreporter.write_line(f"criterion {n:>2}: {status:<8} {name}")
