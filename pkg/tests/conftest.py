def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance checklist (one line per criterion) even when
    stdout capture is on."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
