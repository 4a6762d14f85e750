import numpy as np
import pytest
from hypothesis import strategies as st

from qutrit_contextuality.core import QutritState, hermitize, random_state

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def _record(name: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


seeds = st.integers(min_value=0, max_value=2**32 - 1)
states = seeds.map(random_state)
finite = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_matrices(draw):
    vals = draw(st.lists(finite, min_size=18, max_size=18))
    a = np.array(vals[:9]).reshape(3, 3) + 1j * np.array(vals[9:]).reshape(3, 3)
    return hermitize(a)


@st.composite
def diagonal_states(draw):
    w = np.array(draw(st.lists(st.floats(0, 1), min_size=3, max_size=3)))
    if w.sum() == 0:
        w = np.ones(3)
    return QutritState(np.diag(w / w.sum()).astype(complex))
