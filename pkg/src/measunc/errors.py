"""Error measures for approximate qubit measurements.

Two families live here:

* the metric error ``D``, a state-independent distance between POVMs
  (twice the largest operator-norm discrepancy over outcome subsets);
* the noise measure ``eps``, a state-dependent rms-style comparison of the
  approximator's moment operators with the target operator, plus the local
  uniform variant ``eps_bar``.

All public functions return the error itself; ``*_sq`` variants return squares.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Union

import numpy as np

from .core import (
    DensityOperator,
    DichotomicPovm,
    DiscretePovm,
    Povm,
    QubitOperator,
    as_discrete,
    moment,
    operator_norm,
)

TAU_EIG = 1e-10
MAX_SUBSET_OUTCOMES = 16


class Measure(str, enum.Enum):
    METRIC = "metric"
    NOISE = "noise"


@dataclass(frozen=True)
class ErrorPoint:
    e_a: float
    e_b: float
    measure: Measure

    def __post_init__(self):
        if self.e_a < 0 or self.e_b < 0:
            raise ValueError(f"errors must be nonnegative, got ({self.e_a}, {self.e_b})")


def _sqrt0(x: float) -> float:
    # rounding can push an exact zero slightly negative
    return float(np.sqrt(max(0.0, x)))


def metric_error_dichotomic(A: DichotomicPovm, C: DichotomicPovm) -> float:
    """``2 ||A+ - C+||``; equals ``|a - c|`` for symmetric pairs."""
    return 2.0 * operator_norm(A.effect(1) - C.effect(1))


def metric_error_general(A: Povm, C: Povm) -> float:
    """Probabilistic distance by enumerating outcome subsets.

    Outcomes are matched by label, so both POVMs must share one outcome set.
    """
    A, C = as_discrete(A), as_discrete(C)
    if set(A.outcomes) != set(C.outcomes):
        raise ValueError(f"outcome sets differ: {A.outcomes} vs {C.outcomes}")
    n = len(A)
    if n > MAX_SUBSET_OUTCOMES:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_OUTCOMES} outcomes")
    diffs = [A.effect(m) - C.effect(m) for m in A.outcomes]
    best = 0.0
    for size in range(1, n):
        for subset in combinations(diffs, size):
            best = max(best, operator_norm(sum(subset, QubitOperator.zero())))
    return 2.0 * best


def _first_moment(A: Union[Povm, QubitOperator]) -> QubitOperator:
    return A if isinstance(A, QubitOperator) else moment(A, 1)


def noise_general_sq(
    A: Union[Povm, QubitOperator],
    C: Povm,
    state: DensityOperator,
    method: str = "moment",
) -> float:
    """Squared noise of ``C`` approximating the target ``A`` in ``state``.

    ``method="moment"`` uses ``<(C[1]-A)^2> + <C[2]-C[1]^2>`` in Bloch form and
    accepts a bare target operator.  ``method="double_sum"`` evaluates the
    value-comparison form ``sum_ij (a_i - a_j)^2 Re tr[rho A_i C_j]`` with 2x2
    complex matrices and needs both POVMs on one outcome set (it coincides with
    the moment form for sharp targets).
    """
    C = as_discrete(C)
    if method == "moment":
        C1 = moment(C, 1)
        spread = (C1 - _first_moment(A)).square()
        variance = moment(C, 2) - C1.square()
        return spread.expectation(state) + variance.expectation(state)
    if method == "double_sum":
        rho = state.to_matrix()
        if isinstance(A, QubitOperator):
            raise TypeError("double_sum needs the target as a POVM")
        A = as_discrete(A)
        if set(A.outcomes) != set(C.outcomes):
            raise ValueError(f"outcome sets differ: {A.outcomes} vs {C.outcomes}")
        total = 0.0
        for ai, Ai in A.items():
            Am = Ai.to_matrix()
            for aj in A.outcomes:
                Cj = C.effect(aj).to_matrix()
                total += (ai - aj) ** 2 * np.trace(rho @ Am @ Cj).real
        return float(total)
    raise ValueError(f"unknown method {method!r}")


def noise_general(A, C, state, method: str = "moment") -> float:
    return _sqrt0(noise_general_sq(A, C, state, method))


def noise_symmetric_sq(a, c) -> float:
    a, c = np.asarray(a, float), np.asarray(c, float)
    return float((a - c) @ (a - c) + 1.0 - c @ c)


def noise_symmetric(a, c) -> float:
    """State-independent noise of the symmetric observable ``c`` against sharp ``a``."""
    return _sqrt0(noise_symmetric_sq(a, c))


def noise_biased_sq(a, C: DichotomicPovm, state: DensityOperator) -> float:
    a = np.asarray(a, float)
    return float(2.0 * (1.0 - a @ (C.c + C.gamma * state.r)))


def noise_biased(a, C: DichotomicPovm, state: DensityOperator) -> float:
    return _sqrt0(noise_biased_sq(a, C, state))


def is_eigenstate(a, state: DensityOperator, tol: float = TAU_EIG) -> bool:
    a = np.asarray(a, float)
    return min(np.linalg.norm(state.r - a), np.linalg.norm(state.r + a)) <= tol


def local_uniform_error_sq(a, C: DichotomicPovm, state: DensityOperator) -> float:
    if is_eigenstate(a, state):
        return noise_biased_sq(a, C, state)
    a = np.asarray(a, float)
    return float(2.0 * (1.0 - a @ C.c + abs(C.gamma)))


def local_uniform_error(a, C: DichotomicPovm, state: DensityOperator) -> float:
    """Noise on eigenstates of the target, its worst case over all states elsewhere.

    Only the dichotomic qubit form is defined.
    """
    return _sqrt0(local_uniform_error_sq(a, C, state))
