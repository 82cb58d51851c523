from __future__ import annotations

ACCEPTANCE_LINES: dict[str, str] = {}


def record_acceptance(key: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[key] = f"{'PASS' if ok else 'FAIL'}  {key}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split()[1])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
