import functools

import numpy as np
import pytest

from oscsig.field import PrimeField, SL2Element, sl2_elements
from oscsig.heisenberg import heisenberg_system
from oscsig.oscillator import build_system


@functools.lru_cache(maxsize=None)
def field(p):
    return PrimeField(p)


@functools.lru_cache(maxsize=None)
def system(p, kind):
    if kind == "heisenberg":
        return heisenberg_system(field(p))
    return build_system(field(p), kind)


@functools.lru_cache(maxsize=None)
def group(p):
    return list(sl2_elements(field(p)))


def random_sl2(rng, F):
    while True:
        a, b, c = (int(x) for x in rng.integers(F.p, size=3))
        if a:
            return SL2Element.make(F, a, b, c, (1 + b * c) * F.inv(a))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=[5, 7])
def small_field(request):
    return field(request.param)


# criterion number -> list of (part, passed, detail), filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(passed for _, passed, _ in parts)
        bad = [f"{name}: {detail}" for name, passed, detail in parts if not passed]
        tail = f"  failing: {'; '.join(bad)}" if bad else ""
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({len(parts)} parts){tail}")
