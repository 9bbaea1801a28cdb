import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from measunc.compat import unsharpness
from measunc.core import DensityOperator, DichotomicPovm, DiscretePovm, QubitOperator, sharp
from measunc.errors import (
    ErrorPoint,
    Measure,
    is_eigenstate,
    local_uniform_error,
    local_uniform_error_sq,
    metric_error_dichotomic,
    metric_error_general,
    noise_biased,
    noise_biased_sq,
    noise_general,
    noise_general_sq,
    noise_symmetric,
    noise_symmetric_sq,
)

from conftest import ball_vectors, dichotomic, discrete_povms, states, unit_vectors


def test_error_point_rejects_negative():
    with pytest.raises(ValueError):
        ErrorPoint(-0.1, 0.0, Measure.METRIC)
    assert ErrorPoint(0.0, 1.0, "noise").measure == Measure.NOISE


# --- metric error ---------------------------------------------------------------


def test_metric_dichotomic_examples():
    A = sharp((1, 0, 0))
    assert metric_error_dichotomic(A, A) == 0.0
    assert metric_error_dichotomic(A, sharp((0, 1, 0))) == pytest.approx(math.sqrt(2))


@given(unit_vectors(), dichotomic())
def test_metric_dichotomic_biased_closed_form(a, C):
    A = sharp(a)
    expected = abs(C.gamma) + np.linalg.norm(a - C.c)
    # independent oracle: largest |eigenvalue| of 2 (A+ - C+)
    diff = A.effect(1).to_matrix() - C.effect(1).to_matrix()
    oracle = 2 * np.max(np.abs(np.linalg.eigvalsh(diff)))
    assert metric_error_dichotomic(A, C) == pytest.approx(expected, abs=1e-12)
    assert oracle == pytest.approx(expected, abs=1e-12)


@given(unit_vectors(), dichotomic())
def test_metric_general_reduces_to_dichotomic(a, C):
    A = sharp(a)
    assert metric_error_general(A, C) == pytest.approx(metric_error_dichotomic(A, C), abs=1e-12)


@given(discrete_povms())
def test_metric_general_zero_on_itself(E):
    assert metric_error_general(E, E) == 0.0


def test_metric_general_rejects_label_mismatch():
    with pytest.raises(ValueError):
        metric_error_general(sharp((0, 0, 1)), DiscretePovm((1, 2), sharp((0, 0, 1)).effects))


def test_metric_general_outcome_limit():
    n = 17
    E = DiscretePovm(tuple(range(n)), tuple(QubitOperator(2 / n, (0, 0, 0)) for _ in range(n)))
    with pytest.raises(ValueError):
        metric_error_general(E, E)


# --- noise ----------------------------------------------------------------------


@given(unit_vectors(), states())
def test_noise_zero_for_perfect_measurement(a, rho):
    A = sharp(a)
    assert noise_general_sq(A, A, rho) == pytest.approx(0.0, abs=1e-14)
    assert noise_general_sq(A, A, rho, "double_sum") == pytest.approx(0.0, abs=1e-14)


def test_noise_symmetric_examples():
    a = np.array([0.0, 0.0, 1.0])
    assert noise_symmetric(a, a) == 0.0
    assert noise_symmetric(a, (0, 0, 0)) == pytest.approx(math.sqrt(2))
    for phi in (0.0, 0.4, math.pi / 2):
        assert noise_symmetric_sq(a, math.sin(phi) * a) == pytest.approx(2 * (1 - math.sin(phi)))


@given(unit_vectors(), ball_vectors(), states())
def test_symmetric_decomposition_and_state_independence(a, c, rho):
    A, C = sharp(a), DichotomicPovm.symmetric(c)
    D = metric_error_dichotomic(A, C)
    assert noise_symmetric_sq(a, c) == pytest.approx(D * D + unsharpness(c) ** 2, abs=1e-9)
    assert noise_general_sq(A, C, rho) == pytest.approx(noise_symmetric_sq(a, c), abs=1e-9)


@given(unit_vectors(), ball_vectors())
def test_symmetric_noise_constant_over_states(a, c):
    A, C = sharp(a), DichotomicPovm.symmetric(c)
    rng = np.random.default_rng(0)
    vals = []
    for _ in range(100):
        r = rng.normal(size=3)
        r *= rng.uniform() / np.linalg.norm(r)
        vals.append(noise_general_sq(A, C, DensityOperator(r)))
    assert max(vals) - min(vals) < 1e-9


@given(unit_vectors(), dichotomic(), states())
def test_noise_routes_agree(a, C, rho):
    A = sharp(a)
    moment_form = noise_general_sq(A, C, rho, "moment")
    double_sum = noise_general_sq(A, C, rho, "double_sum")
    assert moment_form == pytest.approx(double_sum, abs=1e-9)
    assert moment_form == pytest.approx(noise_biased_sq(a, C, rho), abs=1e-9)


@given(discrete_povms(max_outcomes=4), states(), st.integers(0, 10**6))
def test_noise_routes_agree_for_n_outcome_sharp_targets(C, rho, seed):
    # a sharp target carried on the same label set: two eigenprojections, zeros elsewhere
    rng = np.random.default_rng(seed)
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    hi, lo = rng.choice(len(C.outcomes), 2, replace=False)
    effects = [QubitOperator.zero()] * len(C.outcomes)
    effects[hi], effects[lo] = QubitOperator(1, n), QubitOperator(1, -n)
    A = DiscretePovm(C.outcomes, tuple(effects))
    assert noise_general_sq(A, C, rho) == pytest.approx(
        noise_general_sq(A, C, rho, "double_sum"), abs=1e-9
    )


def test_noise_general_options():
    A = sharp((0, 0, 1))
    rho = DensityOperator((0, 0, 1))
    with pytest.raises(ValueError):
        noise_general_sq(A, A, rho, "bogus")
    with pytest.raises(TypeError):
        noise_general_sq(QubitOperator(0, (0, 0, 2)), A, rho, "double_sum")
    # a bare target operator is accepted by the moment route
    assert noise_general(QubitOperator(0, (0, 0, 2)), A, rho) == 0.0


def test_noise_biased_examples():
    a = np.array([1.0, 0.0, 0.0])
    C = DichotomicPovm.symmetric((0.5, 0.2, 0))
    assert noise_biased(a, C, DensityOperator((0, 1, 0))) == pytest.approx(noise_symmetric(a, C.c))
    trivial = DichotomicPovm(1.0, (0, 0, 0))
    assert noise_biased(a, trivial, DensityOperator(a)) == 0.0


@given(
    unit_vectors(),
    st.floats(0.01, 1.0),
    unit_vectors(),
    st.floats(0.0, 1.0),
)
def test_zero_biased_noise_forces_aligned_state_and_direction(a, gamma, u, t):
    """eps = 0 with gamma > 0 only when r = a and c = |c| a with |c| = 1 - gamma."""
    c = (1 - gamma) * u
    r = t * a + (1 - t) * u
    r /= max(1.0, np.linalg.norm(r))
    eps2 = noise_biased_sq(a, DichotomicPovm(gamma, c), DensityOperator(r))
    if eps2 < 1e-12:
        np.testing.assert_allclose(r, a, atol=1e-5)
        if gamma < 1 - 1e-6:
            np.testing.assert_allclose(u, a, atol=1e-5)


# --- local uniform error --------------------------------------------------------


def test_is_eigenstate_gate():
    a = np.array([0, 0, 1.0])
    assert is_eigenstate(a, DensityOperator(a))
    assert is_eigenstate(a, DensityOperator(-a))
    assert not is_eigenstate(a, DensityOperator((0, 1e-9, math.sqrt(1 - 1e-18))))


def test_local_uniform_examples():
    a = np.array([0, 0, 1.0])
    trivial = DichotomicPovm(1.0, (0, 0, 0))
    assert local_uniform_error(a, trivial, DensityOperator(a)) == 0.0
    t = 1e-6
    off = DensityOperator((math.sin(t), 0, math.cos(t)))
    assert local_uniform_error(a, trivial, off) == 2.0
    exact = sharp(a)
    for r in ((0, 0, 1), (0, 0, -1), (1, 0, 0), (0.1, 0.2, 0.3)):
        assert local_uniform_error(a, exact, DensityOperator(r)) == pytest.approx(0.0, abs=1e-7)


def test_local_uniform_jump_along_converging_sequence():
    a = np.array([0, 0, 1.0])
    trivial = DichotomicPovm(1.0, (0, 0, 0))
    for k in range(1, 10):
        t = 10.0**-k
        assert local_uniform_error_sq(a, trivial, DensityOperator((math.sin(t), 0, math.cos(t)))) == 4.0
    assert local_uniform_error_sq(a, trivial, DensityOperator(a)) == 0.0


@given(unit_vectors(), dichotomic(), states())
def test_local_uniform_dominates_noise(a, C, rho):
    assert local_uniform_error_sq(a, C, rho) >= noise_biased_sq(a, C, rho) - 1e-12


def test_false_positive_regression():
    from measunc.counterexamples import three_outcome_setup
    from measunc.compat import post_process
    from measunc.core import spectral_povm

    g, E, A, rho = three_outcome_setup()
    C = post_process(E, {1: 1, 2: -1, 3: 0})
    assert noise_general_sq(A, C, rho) == pytest.approx(0.0, abs=1e-12)
    hi, lo = spectral_povm(A).effects
    target = DiscretePovm((1, -1, 0), (hi, lo, QubitOperator.zero()))
    assert metric_error_general(target, C) > 0.5
