import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].lstrip("C").rstrip(":"))):
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    def log(cid: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} C{cid}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return log
