import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import ACCEPTANCE  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
