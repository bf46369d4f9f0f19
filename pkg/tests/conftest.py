import numpy as np
import pytest
from hypothesis import strategies as st

from wframe.extension import extend_algorithm_a
from wframe.masks import generate_mask
from wframe.vgroup import GroupElement

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


BASES = (2, 3, 5)


@st.composite
def elements(draw, p=None, lo=-4, hi=6):
    """Finitely supported group elements with digits at indices lo..hi."""
    if p is None:
        p = draw(st.sampled_from(BASES))
    digits = draw(st.dictionaries(st.integers(lo, hi), st.integers(0, p - 1), max_size=hi - lo + 1))
    return GroupElement.from_map(p, digits)


@st.composite
def element_pairs(draw, count=2):
    p = draw(st.sampled_from(BASES))
    return tuple(draw(elements(p=p)) for _ in range(count))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def haar():
    return generate_mask([1, 0], 2)


@pytest.fixture
def haar_family(haar):
    return extend_algorithm_a(haar, 1)


@pytest.fixture
def mask22():
    return generate_mask([1, 0.5, 0, 0.5], 2)


@pytest.fixture
def family22(mask22):
    return extend_algorithm_a(mask22, 2)
