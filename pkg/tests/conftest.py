"""Shared pytest wiring.

After the run, prints one verdict line per acceptance criterion (the
``test_criterion_*`` functions in test_acceptance.py), using the detail
strings those tests attach via ``record_property``.
"""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            match = _CRITERION.search(getattr(rep, "nodeid", ""))
            if match is None:
                continue
            number = int(match.group(1))
            detail = ""
            for name, value in getattr(rep, "user_properties", []):
                if name == "detail":
                    detail = str(value)
            previous = results.get(number)
            failed = status != "passed"
            if previous is not None:
                failed = failed or previous[0]
                detail = detail or previous[1]
            results[number] = (failed, detail)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        failed, detail = results[number]
        line = f"criterion {number}: {'FAIL' if failed else 'PASS'}"
        if detail:
            line += f" — {detail}"
        terminalreporter.write_line(line)
