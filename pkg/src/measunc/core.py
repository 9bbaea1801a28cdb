"""Bloch-form algebra for qubit operators, effects, states and POVMs.

Every self-adjoint qubit operator is stored as ``A = 1/2 (alpha I + v . sigma)``.
With that convention the eigenvalues are ``(alpha +- |v|) / 2`` and the trace
is ``alpha``, so validity checks and Born-rule probabilities never need a
matrix backend.  A 2x2 complex representation is still available through
:meth:`QubitOperator.to_matrix` for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

TAU_POS = 1e-12
TAU_NUM = 1e-9

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
IDENTITY = np.eye(2, dtype=complex)


class InvalidOperatorError(ValueError):
    """Raised when an operator, state or POVM violates its validity predicate."""


def bloch(v: Iterable[float]) -> np.ndarray:
    """Validated, read-only Bloch vector (finite, shape (3,), no negative zeros)."""
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise InvalidOperatorError(f"Bloch vector needs 3 components, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidOperatorError(f"non-finite Bloch vector {arr!r}")
    arr = arr + 0.0  # -0.0 -> 0.0
    arr.setflags(write=False)
    return arr


def _finite(x: float, name: str) -> float:
    x = float(x)
    if not np.isfinite(x):
        raise InvalidOperatorError(f"{name} must be finite, got {x}")
    return x + 0.0


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise InvalidOperatorError("cannot normalise the zero vector")
    return bloch(v / n)


@dataclass(frozen=True, eq=False)
class QubitOperator:
    """Self-adjoint operator ``1/2 (alpha I + vec . sigma)``."""

    alpha: float
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _finite(self.alpha, "alpha"))
        object.__setattr__(self, "vec", bloch(self.vec))

    # arithmetic stays inside the Hermitian Bloch form
    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        return QubitOperator(self.alpha + other.alpha, self.vec + other.vec)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return QubitOperator(self.alpha - other.alpha, self.vec - other.vec)

    def __neg__(self) -> "QubitOperator":
        return QubitOperator(-self.alpha, -self.vec)

    def __mul__(self, s: float) -> "QubitOperator":
        return QubitOperator(s * self.alpha, s * self.vec)

    __rmul__ = __mul__

    @classmethod
    def identity(cls) -> "QubitOperator":
        return cls(2.0, (0.0, 0.0, 0.0))

    @classmethod
    def zero(cls) -> "QubitOperator":
        return cls(0.0, (0.0, 0.0, 0.0))

    @classmethod
    def from_pauli(cls, scalar: float, v) -> "QubitOperator":
        """Build ``scalar I + v . sigma`` (no 1/2 prefactor)."""
        return cls(2.0 * scalar, 2.0 * np.asarray(v, dtype=float))

    @classmethod
    def from_matrix(cls, m) -> "QubitOperator":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2) or not np.allclose(m, m.conj().T, atol=TAU_POS):
            raise InvalidOperatorError("expected a Hermitian 2x2 matrix")
        alpha = np.trace(m).real
        vec = [np.trace(m @ p).real for p in PAULI]
        return cls(alpha, vec)

    def to_matrix(self) -> np.ndarray:
        return 0.5 * (self.alpha * IDENTITY + np.tensordot(self.vec, PAULI, axes=1))

    @property
    def trace(self) -> float:
        return self.alpha

    @property
    def eigenvalues(self) -> tuple[float, float]:
        r = float(np.linalg.norm(self.vec))
        return 0.5 * (self.alpha - r), 0.5 * (self.alpha + r)

    def square(self) -> "QubitOperator":
        # (a I + v.s)^2 / 4 = ((a^2+|v|^2) I + 2a v.s) / 4
        return QubitOperator(
            0.5 * (self.alpha**2 + self.vec @ self.vec), self.alpha * self.vec
        )

    def expectation(self, state: "DensityOperator") -> float:
        """``tr[rho A]``."""
        return 0.5 * (self.alpha + float(self.vec @ state.r))

    def is_effect(self, tol: float = TAU_POS) -> bool:
        return float(np.linalg.norm(self.vec)) <= min(self.alpha, 2.0 - self.alpha) + tol

    def isclose(self, other: "QubitOperator", tol: float = TAU_NUM) -> bool:
        return abs(self.alpha - other.alpha) <= tol and bool(
            np.all(np.abs(self.vec - other.vec) <= tol)
        )

    def __repr__(self) -> str:
        x, y, z = self.vec
        return f"QubitOperator(alpha={self.alpha:.6g}, vec=({x:.6g}, {y:.6g}, {z:.6g}))"


class Effect(QubitOperator):
    """A qubit operator with ``0 <= E <= I``."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_effect():
            raise InvalidOperatorError(
                f"not an effect: |vec|={np.linalg.norm(self.vec):.3g}, alpha={self.alpha:.3g}"
            )

    @classmethod
    def of(cls, op: QubitOperator) -> "Effect":
        return cls(op.alpha, op.vec)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Qubit state ``1/2 (I + r . sigma)`` with ``|r| <= 1``."""

    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", bloch(self.r))
        if np.linalg.norm(self.r) > 1.0 + TAU_POS:
            raise InvalidOperatorError(f"state Bloch vector too long: {np.linalg.norm(self.r)}")

    @classmethod
    def maximally_mixed(cls) -> "DensityOperator":
        return cls((0.0, 0.0, 0.0))

    @property
    def is_pure(self) -> bool:
        return abs(np.linalg.norm(self.r) - 1.0) <= TAU_POS

    def to_matrix(self) -> np.ndarray:
        return 0.5 * (IDENTITY + np.tensordot(self.r, PAULI, axes=1))


@dataclass(frozen=True, eq=False)
class DichotomicPovm:
    """Two-outcome (+1/-1) POVM with effects ``1/2((1 +- gamma) I +- c . sigma)``.

    ``gamma`` is the bias; the observable is symmetric when it vanishes.
    """

    gamma: float
    c: np.ndarray

    outcomes = (1, -1)

    def __post_init__(self):
        object.__setattr__(self, "gamma", _finite(self.gamma, "gamma"))
        object.__setattr__(self, "c", bloch(self.c))
        if abs(self.gamma) + np.linalg.norm(self.c) > 1.0 + TAU_POS:
            raise InvalidOperatorError(
                f"|gamma| + |c| = {abs(self.gamma) + np.linalg.norm(self.c):.6g} exceeds 1"
            )

    @classmethod
    def symmetric(cls, c) -> "DichotomicPovm":
        return cls(0.0, c)

    @property
    def is_symmetric(self) -> bool:
        return self.gamma == 0.0

    def effect(self, sign: int) -> Effect:
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        return Effect(1.0 + sign * self.gamma, sign * self.c)

    @property
    def effects(self) -> tuple[Effect, Effect]:
        return self.effect(1), self.effect(-1)

    def to_discrete(self) -> "DiscretePovm":
        return DiscretePovm(self.outcomes, self.effects)


@dataclass(frozen=True, eq=False)
class DiscretePovm:
    """Finite POVM with real outcome labels, ``outcomes[i] -> effects[i]``."""

    outcomes: tuple
    effects: tuple

    def __post_init__(self):
        outcomes = tuple(float(m) + 0.0 for m in self.outcomes)
        effects = tuple(e if isinstance(e, Effect) else Effect.of(e) for e in self.effects)
        if len(outcomes) != len(effects):
            raise InvalidOperatorError("outcomes and effects differ in length")
        if not outcomes:
            raise InvalidOperatorError("a POVM needs at least one outcome")
        if len(set(outcomes)) != len(outcomes):
            raise InvalidOperatorError(f"duplicate outcome labels in {outcomes}")
        total = sum(effects, QubitOperator.zero())
        if abs(total.alpha - 2.0) > TAU_POS * len(effects) or np.linalg.norm(
            total.vec
        ) > TAU_POS * len(effects):
            raise InvalidOperatorError(f"effects do not sum to the identity: {total!r}")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "effects", effects)

    def __len__(self) -> int:
        return len(self.outcomes)

    def items(self):
        return zip(self.outcomes, self.effects)

    def effect(self, outcome: float) -> Effect:
        try:
            return self.effects[self.outcomes.index(float(outcome))]
        except ValueError:
            raise KeyError(f"unknown outcome {outcome!r}; outcomes are {self.outcomes}") from None

    def as_dict(self) -> dict:
        return dict(self.items())


Povm = Union[DiscretePovm, DichotomicPovm]


def as_discrete(povm: Povm) -> DiscretePovm:
    return povm.to_discrete() if isinstance(povm, DichotomicPovm) else povm


def effect_of(povm: DichotomicPovm, sign: int) -> Effect:
    return povm.effect(sign)


def probability(povm: Povm, outcome: float, state: DensityOperator) -> float:
    """Born rule ``tr[rho E_outcome]``; raises ``KeyError`` for unknown labels."""
    return as_discrete(povm).effect(outcome).expectation(state)


def moment(povm: Povm, k: int) -> QubitOperator:
    """k-th moment operator ``sum_i m_i**k E_i``."""
    if k < 1 or int(k) != k:
        raise ValueError(f"moment order must be a positive integer, got {k}")
    povm = as_discrete(povm)
    total = QubitOperator.zero()
    for m, e in povm.items():
        total = total + (m**k) * e
    return total


def operator_norm(op: QubitOperator) -> float:
    return 0.5 * (abs(op.alpha) + float(np.linalg.norm(op.vec)))


def sharp(a) -> DichotomicPovm:
    """Sharp +-1 observable along the unit vector ``a``."""
    return DichotomicPovm(0.0, unit(a))


def spectral_povm(op: QubitOperator) -> DiscretePovm:
    """Spectral measure of a self-adjoint operator, labelled by its eigenvalues."""
    lo, hi = op.eigenvalues
    if np.isclose(lo, hi, atol=TAU_POS):
        return DiscretePovm((hi,), (QubitOperator.identity(),))
    n = unit(op.vec)
    return DiscretePovm((hi, lo), (Effect(1.0, n), Effect(1.0, -n)))



def anticommutator(E: QubitOperator, A: QubitOperator) -> QubitOperator:
    """``E A + A E``; the cross-product terms cancel, so it stays Hermitian."""
    return QubitOperator(E.alpha * A.alpha + E.vec @ A.vec, E.alpha * A.vec + A.alpha * E.vec)
