import pytest

from supercong.scan import sieve_primes


@pytest.fixture(scope="session")
def odd_primes_below():
    cache = {}

    def get(n: int) -> list[int]:
        if n not in cache:
            cache[n] = sieve_primes(3, n - 1)
        return cache[n]

    return get


_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    prev = _criteria.get(number, (text, "PASS"))[1]
    if call.excinfo is not None and call.when in ("setup", "call", "teardown"):
        _criteria[number] = (text, "FAIL")
    elif call.when == "call":
        _criteria[number] = (text, prev)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, verdict = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {text}")
