import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    rows = getattr(mod, "RESULTS", {})
    if rows:
        terminalreporter.section("acceptance")
        for n in sorted(rows):
            terminalreporter.write_line(rows[n])
