import sys
import math

import numpy as np
from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

finite = st.floats(-5.0, 5.0, allow_nan=False, allow_infinity=False)
coord = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
angle = st.floats(0.0, math.pi / 2, allow_nan=False)


@st.composite
def vectors(draw, elements=finite):
    return np.array([draw(elements) for _ in range(3)])


@st.composite
def ball_vectors(draw, radius=1.0):
    v = draw(vectors(coord))
    n = np.linalg.norm(v)
    scale = draw(st.floats(0.0, radius))
    return v / n * scale if n > 1e-6 else np.zeros(3)


@st.composite
def unit_vectors(draw):
    v = draw(vectors(coord))
    n = np.linalg.norm(v)
    if n < 1e-3:
        return np.array([0.0, 0.0, 1.0])
    return v / n


@st.composite
def states(draw):
    from measunc.core import DensityOperator

    return DensityOperator(draw(ball_vectors()))


@st.composite
def dichotomic(draw, symmetric=False):
    from measunc.core import DichotomicPovm

    c = draw(ball_vectors())
    room = 1.0 - np.linalg.norm(c)
    gamma = 0.0 if symmetric else draw(st.floats(-1.0, 1.0)) * room
    return DichotomicPovm(gamma, c)


@st.composite
def discrete_povms(draw, max_outcomes=5, labels=None):
    """Random n-outcome POVM built by splitting I into weighted rank-one pieces."""
    from measunc.core import DiscretePovm, QubitOperator

    n = draw(st.integers(2, max_outcomes))
    # effects w_i (I + u_i . s) with sum w_i = 1 and sum w_i u_i = 0 after a correction
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    w = rng.dirichlet(np.ones(n))
    u = rng.normal(size=(n, 3))
    u /= np.linalg.norm(u, axis=1)[:, None]
    u *= rng.uniform(0, 1, size=(n, 1))
    drift = (w[:, None] * u).sum(axis=0)
    vecs = u - drift[None, :]  # sum w_i vecs_i = 0
    shrink = 1.0 / max(1.0, np.max(np.linalg.norm(vecs, axis=1)))
    vecs *= shrink
    effects = [QubitOperator(2 * wi, 2 * wi * vi) for wi, vi in zip(w, vecs)]
    # absorb rounding in the last effect
    total = sum(effects[:-1], QubitOperator.zero())
    effects[-1] = QubitOperator(2.0 - total.alpha, -total.vec)
    if labels is None:
        labels = rng.choice(np.arange(-20, 21) / 4.0, n, replace=False)
    return DiscretePovm(tuple(float(x) for x in labels[:n]), tuple(effects))


def boundary_pair(theta_cd, s):
    """Coplanar pair saturating the compatibility boundary: |c| = s, angle theta_cd."""
    c = np.array([s, 0.0, 0.0])
    # solve |d|^2 (1 - s^2 cos^2) = 1 - s^2 for the given angle
    cos = math.cos(theta_cd)
    r = math.sqrt((1 - s * s) / (1 - s * s * cos * cos))
    d = r * np.array([cos, math.sin(theta_cd), 0.0])
    return c, d


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
