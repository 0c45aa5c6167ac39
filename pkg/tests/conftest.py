import itertools
from math import gcd

import pytest
from hypothesis import settings

from exacthom.oracle import bareiss_det

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def determinantal_divisors(rows):
    """Invariant factors from gcds of k x k minors (independent of any elimination)."""
    m, n = len(rows), len(rows[0]) if rows else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                g = gcd(g, bareiss_det([[rows[i][j] for j in c] for i in r]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


@pytest.fixture
def rng():
    from exacthom.randgen import SplitMix64
    return SplitMix64(20240601)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, title, ok, elapsed, limit, detail=""):
        status = "PASS" if ok and elapsed < limit else "FAIL"
        line = f"criterion {number}: {status}  {title} ({elapsed:.2f}s, limit {limit}s){detail}"
        lines.append(line)
        print(line)
        return status == "PASS"

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
