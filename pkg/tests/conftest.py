import pytest

_LINES: list[str] = []


class CriterionReporter:
    def __init__(self, capsys):
        self._capsys = capsys

    def __call__(self, number: int, passed: bool, detail: str) -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        _LINES.append(line)
        with self._capsys.disabled():
            print("\n" + line)
        return passed

    def info(self, number: int, detail: str) -> None:
        line = f"[INFO] criterion {number}: {detail}"
        _LINES.append(line)
        with self._capsys.disabled():
            print("\n" + line)


@pytest.fixture
def criterion(capsys):
    return CriterionReporter(capsys)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
