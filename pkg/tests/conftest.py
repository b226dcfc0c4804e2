import pytest

from theta_asym.partitions import partition_table
from theta_asym.records import TableStore


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow checks (table rows 200 and 400)")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion this test belongs to")
    config._acceptance = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    entry = item.config._acceptance.setdefault(number, {"title": title, "parts": []})
    entry["parts"].append((item.name, outcome, call.duration))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        entry = results[number]
        parts = entry["parts"]
        status = "PASS" if all(o == "PASS" for _, o, _ in parts) else "FAIL"
        secs = sum(d for _, _, d in parts)
        failed = [name for name, o, _ in parts if o != "PASS"]
        note = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {entry['title']}  [{secs:.1f}s]{note}")


@pytest.fixture(scope="session")
def p_table():
    return partition_table(1, 10200)


@pytest.fixture(scope="session")
def store():
    return TableStore()
