import sys


def pytest_terminal_summary(terminalreporter):
    # repeat the acceptance PASS/FAIL lines so they survive output capture
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
