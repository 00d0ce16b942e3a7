import os
import time

from helpers import ACCEPTANCE

SUITE_LIMIT = 15 * 60
_start = time.monotonic()


def pytest_sessionfinish(session, exitstatus):
    if not ACCEPTANCE:
        return
    elapsed = time.monotonic() - _start
    external = os.environ.get("RWCERT_SAT_SOLVER")
    ok = elapsed < SUITE_LIMIT and not external
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  criterion 6 (whole session): "
                      f"{elapsed:.1f} s < {SUITE_LIMIT} s, external solver "
                      f"{'set: ' + external if external else 'unset'}")
    if not ok:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
