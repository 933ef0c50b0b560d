from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rbx.io import FIXTURES, load_fixture  # noqa: E402
from rbx.rota_baxter import RBOperator  # noqa: E402


class Fixture:
    def __init__(self, name: str):
        self.name = name
        self.doc = load_fixture(name)
        self.algebra = self.doc.algebra
        self.bimodule = self.doc.bimodule
        self.op = RBOperator(self.algebra, self.bimodule, self.doc.operator())


_CACHE: dict[str, Fixture] = {}


def fixture(name: str) -> Fixture:
    if name not in _CACHE:
        _CACHE[name] = Fixture(name)
    return _CACHE[name]


@pytest.fixture(params=FIXTURES)
def fx(request) -> Fixture:
    return fixture(request.param)


@pytest.fixture
def dual() -> Fixture:
    return fixture("dual_numbers")


def random_array(rng: random.Random, shape, lo: int = -3, hi: int = 3, density: float = 0.7) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        if rng.random() < density:
            num = rng.randint(lo, hi)
            den = rng.choice((1, 1, 1, 2, 3))
            out[idx] = Fraction(num, den)
        else:
            out[idx] = Fraction(0)
    return out


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, collected from user_properties."""
    rows = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props:
                continue
            k = props["criterion"]
            ok = rep.passed and rows.get(k, (None, True))[1]
            rows[k] = (props.get("title", ""), ok, props.get("detail", ""))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(rows):
        title, ok, detail = rows[k]
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
