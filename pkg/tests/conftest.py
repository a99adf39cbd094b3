import pytest

from superprob import equiprobable, partition_of

SUITS = ["club", "diamond", "heart", "spade"]

# criterion number -> [title, passed so far]
_acceptance = {}


@pytest.fixture
def cards():
    return equiprobable(SUITS)


@pytest.fixture
def coin():
    return equiprobable(["H", "T"])


@pytest.fixture
def colour(cards):
    return cards.variable({"club": 1, "diamond": 0, "heart": 0, "spade": 1})


@pytest.fixture
def colour_partition(colour):
    return partition_of(colour)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        number, title = marker.args
        entry = _acceptance.setdefault(number, [title, True])
        entry[1] = entry[1] and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion; several tests may share a number."""
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{number}: {title}")
