import numpy as np
import pytest

from dmccrf.dataset import Schema

FEATURES = tuple(f"f{j}" for j in range(1, 10))


@pytest.fixture
def schema():
    return Schema("t", FEATURES, "flow")


@pytest.fixture
def rng():
    return np.random.default_rng(20170)


def write_rows(path, header, rows):
    lines = [",".join(header)] + [",".join(str(v) for v in r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} ({detail})"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
