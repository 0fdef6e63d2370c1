import pytest

from modeshift import kernels


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    module = kernels.BACKENDS[request.param]
    for name in ("decode_track", "pitch_class_mask", "candidate_masks"):
        monkeypatch.setattr(kernels, name, getattr(module, name))
    return request.param


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary."""
    entry = {"name": request.node.name, "detail": "", "passed": False}
    ACCEPTANCE_RESULTS.append(entry)
    yield entry


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    entry = item.funcargs.get("criterion") if hasattr(item, "funcargs") else None
    if entry is not None and report.when == "call":
        entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE_RESULTS:
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"{status}  {entry['name']}  {entry['detail']}")
