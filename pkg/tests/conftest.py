"""Shared pytest configuration.

After a run that touched the acceptance module, print one verdict line per
acceptance test so the gate can be read without scrolling through -v output.
"""

_ACCEPTANCE_FILE = "test_acceptance.py"
_VERDICTS = {"passed": "PASS", "failed": "FAIL", "error": "FAIL", "skipped": "SKIP"}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome, verdict in _VERDICTS.items():
        for report in terminalreporter.stats.get(outcome, ()):
            nodeid = getattr(report, "nodeid", "")
            when = getattr(report, "when", "call")
            if _ACCEPTANCE_FILE not in nodeid or "::" not in nodeid:
                continue
            if outcome == "passed" and when != "call":
                continue
            name = nodeid.split("::")[-1]
            lines.append((name, verdict))
    if not lines:
        return
    # setup/teardown failures can double-report a test; FAIL wins
    merged = {}
    for name, verdict in sorted(lines):
        if merged.get(name) != "FAIL":
            merged[name] = verdict
    terminalreporter.section("acceptance criteria")
    for name, verdict in sorted(merged.items()):
        label = name.removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"{label}: {verdict}")
