from __future__ import annotations

import pytest

_VERDICTS: dict = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion and assert it."""

    def record(n, title, checks, elapsed, limit=None):
        ok = all(passed for _, passed, _ in checks) and (limit is None or elapsed < limit)
        parts = [f"{name} {'ok' if passed else 'FAIL'} ({info})" for name, passed, info in checks]
        budget = f"{elapsed:.1f}s" + (f" < {limit}s" if limit is not None else "")
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {title} [{budget}] " + "; ".join(parts)
        _VERDICTS[n] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_VERDICTS):
            terminalreporter.write_line(_VERDICTS[n])
