import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    from dcalg.acceptance import format_line

    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(format_line(results[number]))
