import numpy as np
import pytest
from hypothesis import strategies as st

from oneshot.prob import JointDistribution, ProbVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_prob(rng, n, sparsity=0.3):
    while True:
        m = rng.dirichlet(np.ones(n))
        m[rng.random(n) < sparsity] = 0.0
        if m.sum() > 0:
            return ProbVector.from_array(m / m.sum())


def random_joint(rng, nx, ny, sparsity=0.3):
    return JointDistribution.from_array(random_prob(rng, nx * ny, sparsity).mass.reshape(nx, ny))


@st.composite
def prob_vectors(draw, max_size=8):
    n = draw(st.integers(1, max_size))
    w = draw(st.lists(st.integers(0, 20), min_size=n, max_size=n).filter(lambda v: sum(v) > 0))
    m = np.array(w, dtype=float)
    return ProbVector.from_array(m / m.sum())


@st.composite
def joints(draw, max_x=5, max_y=5):
    nx, ny = draw(st.integers(1, max_x)), draw(st.integers(1, max_y))
    w = draw(st.lists(st.integers(0, 20), min_size=nx * ny, max_size=nx * ny).filter(lambda v: sum(v) > 0))
    m = np.array(w, dtype=float).reshape(nx, ny)
    return JointDistribution.from_array(m / m.sum())


epsilons = st.floats(0.0, 0.95, allow_nan=False)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
