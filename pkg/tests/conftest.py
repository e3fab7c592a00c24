import contextlib
import time

import pytest


def pytest_configure(config):
    config.acceptance_lines = []


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.detail = ""


@pytest.fixture
def criterion(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    lines = request.config.acceptance_lines

    @contextlib.contextmanager
    def record(number, title):
        c = _Criterion(number, title)
        start = time.perf_counter()
        try:
            yield c
        except BaseException as e:
            took = time.perf_counter() - start
            msg = str(e).splitlines()[0] if str(e) else type(e).__name__
            lines.append(f"criterion {number} FAIL  {title} ({took:.1f}s): {msg}")
            print(lines[-1])
            raise
        took = time.perf_counter() - start
        lines.append(f"criterion {number} PASS  {title} ({took:.1f}s) {c.detail}".rstrip())
        print(lines[-1])

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
