"""Print one PASS/FAIL line per acceptance criterion after the run."""

from acceptance_registry import RESULTS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        passed, detail = RESULTS[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num}: {status} - {detail}")
