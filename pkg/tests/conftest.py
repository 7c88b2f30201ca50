import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(n, name, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {n} [{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
