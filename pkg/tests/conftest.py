import contextlib
import time

ACCEPTANCE_LINES: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str, time_limit: float | None = None):
    """Record one PASS/FAIL line for an acceptance criterion."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if time_limit is not None:
            assert elapsed <= time_limit, f"took {elapsed:.2f}s, limit {time_limit}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"FAIL  criterion {number}: {title} ({elapsed:.2f}s) -- {exc}")
        raise
    ACCEPTANCE_LINES.append(f"PASS  criterion {number}: {title} ({elapsed:.2f}s)")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
