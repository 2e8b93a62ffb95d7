import pytest

from subsetdfa import Dictionary


@pytest.fixture
def e1():
    return Dictionary.from_sets(2, [[{0}, {0, 1}], [{0, 1}, {1}]])


@pytest.fixture
def e2():
    return Dictionary.from_sets(2, [[{0, 1}, {0}], [{0, 1}, {0}]])


@pytest.fixture
def e3():
    return Dictionary.from_sets(2, [[{0, 1}, {0, 1}, {0, 1}]])


# criterion number -> list of (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        records = ACCEPTANCE[number]
        verdict = "PASS" if all(ok for ok, _ in records) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}")
        for ok, detail in records:
            terminalreporter.write_line(f"    [{'ok' if ok else 'FAIL'}] {detail}")
