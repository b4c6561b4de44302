import sys
import numpy as np
import pytest
from hypothesis import settings, strategies as st

from topt.gf2 import BitMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def bit_matrices(draw, max_rows=10, max_cols=10, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    bits = draw(st.lists(st.integers(0, 1), min_size=r * c, max_size=r * c))
    return BitMatrix(np.array(bits, np.uint8).reshape(r, c), r, c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
