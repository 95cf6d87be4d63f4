"""Prints one ACCEPTANCE line per numbered requirement after the run."""

import re

_PAT = re.compile(r"test_acceptance_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    status = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _PAT.search(getattr(rep, "nodeid", ""))
            if m is None:
                continue
            num = int(m.group(1))
            status[num] = status.get(num, True) and outcome == "passed"
    if not status:
        return
    terminalreporter.section("acceptance")
    for num in sorted(status):
        word = "PASS" if status[num] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num}: {word}")
