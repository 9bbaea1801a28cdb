"""Joint measurability of symmetric qubit observables and outcome post-processing."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Union

import numpy as np

from .core import TAU_POS, DichotomicPovm, DiscretePovm, Effect, QubitOperator, bloch

OutcomeMap = Union[Mapping[float, float], Callable[[float], float]]


class IncompatibleError(ValueError):
    """Raised for pairs outside the joint-measurability region.

    ``violation`` holds ``|c+d| + |c-d| - 2``.
    """

    def __init__(self, violation: float):
        super().__init__(f"observables are not jointly measurable (excess {violation:.3g})")
        self.violation = violation


def compat_sum(c, d) -> float:
    c, d = np.asarray(c, float), np.asarray(d, float)
    return float(np.linalg.norm(c + d) + np.linalg.norm(c - d))


def compatible(c, d, tol: float = TAU_POS) -> bool:
    """Joint measurability of the symmetric observables with directions ``c``, ``d``."""
    return compat_sum(c, d) <= 2.0 + tol


def compat_boundary_residual(c, d) -> float:
    """``|c|^2 + |d|^2 - 1 - (c.d)^2``: zero on the boundary, negative inside."""
    c, d = np.asarray(c, float), np.asarray(d, float)
    return float(c @ c + d @ d - 1.0 - (c @ d) ** 2)


def unsharpness(c) -> float:
    c = np.asarray(c, float)
    return float(np.sqrt(max(0.0, 1.0 - c @ c)))


def commutator_norm(c, d) -> float:
    """Operator norm of ``[C+, D+]`` for ``C+ = (I + c.s)/2``, ``D+ = (I + d.s)/2``."""
    return 0.5 * float(np.linalg.norm(np.cross(c, d)))


@dataclass(frozen=True, eq=False)
class JointObservable:
    """Four-outcome joint observable ``J(k, l)`` of two symmetric dichotomic POVMs."""

    c: np.ndarray
    d: np.ndarray
    M: float
    effects: dict

    def __getitem__(self, kl: tuple[int, int]) -> Effect:
        return self.effects[kl]

    def marginal(self, axis: int) -> DichotomicPovm:
        """Sum out the other index; ``axis=0`` returns the c-observable."""
        plus = QubitOperator.zero()
        for (k, l), e in self.effects.items():
            if (k if axis == 0 else l) == 1:
                plus = plus + e
        # C+ = ((1 + gamma) I + c.s)/2
        return DichotomicPovm(plus.alpha - 1.0, plus.vec)


def joint_observable(c, d) -> JointObservable:
    c, d = bloch(c), bloch(d)
    excess = compat_sum(c, d) - 2.0
    if excess > TAU_POS:
        raise IncompatibleError(excess)
    M = float(c @ d)
    effects = {}
    for k, l in product((1, -1), repeat=2):
        op = QubitOperator(0.5 * (1 + k * l * M), 0.5 * (k * c + l * d))
        effects[(k, l)] = Effect.of(op)
    return JointObservable(c, d, M, effects)


def _as_callable(f: OutcomeMap) -> Callable[[float], float]:
    if callable(f):
        return f
    table = {float(k): float(v) for k, v in f.items()}

    def lookup(m: float) -> float:
        try:
            return table[float(m)]
        except KeyError:
            raise KeyError(f"outcome map is not defined on outcome {m!r}") from None

    return lookup


def post_process(E: DiscretePovm, f: OutcomeMap) -> DiscretePovm:
    """Coarse-grain ``E`` through ``f``: the effect of value ``v`` is the sum over ``f^-1(v)``.

    Outcomes of the result are the image of ``f`` in order of first appearance;
    values with empty preimage do not occur.
    """
    f = _as_callable(f)
    bins: dict[float, QubitOperator] = {}
    for m, e in E.items():
        v = float(f(m))
        bins[v] = bins.get(v, QubitOperator.zero()) + e
    return DiscretePovm(tuple(bins), tuple(bins.values()))


@dataclass(frozen=True, eq=False)
class JointPovm:
    """POVM on a product outcome set ``f(Omega) x g(Omega)``; empty cells hold the zero effect."""

    first: tuple
    second: tuple
    effects: dict

    def __getitem__(self, key: tuple[float, float]) -> Effect:
        return self.effects[(float(key[0]), float(key[1]))]

    def marginal(self, axis: int) -> DiscretePovm:
        labels = self.first if axis == 0 else self.second
        sums = {v: QubitOperator.zero() for v in labels}
        for (x, y), e in self.effects.items():
            key = x if axis == 0 else y
            sums[key] = sums[key] + e
        return DiscretePovm(labels, tuple(sums.values()))


def joint_from_functions(E: DiscretePovm, f: OutcomeMap, g: OutcomeMap) -> JointPovm:
    f, g = _as_callable(f), _as_callable(g)
    fv = [float(f(m)) for m in E.outcomes]
    gv = [float(g(m)) for m in E.outcomes]
    first = tuple(dict.fromkeys(fv))
    second = tuple(dict.fromkeys(gv))
    cells = {(x, y): QubitOperator.zero() for x in first for y in second}
    for x, y, e in zip(fv, gv, E.effects):
        cells[(x, y)] = cells[(x, y)] + e
    return JointPovm(first, second, {k: Effect.of(v) for k, v in cells.items()})
