import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# one pass/fail line per acceptance criterion, echoed after the test
# summary regardless of output capture
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_lines):
            terminalreporter.write_line(line)
