"""Numerical optimisation over the joint-measurability region.

For a fixed symmetric approximator ``c`` the partners ``d`` that are jointly
measurable with it fill a prolate spheroid: foci at ``+-c``, semi-axis 1 along
``c`` and ``sqrt(1 - |c|^2)`` across it.  The conditional minimisers below work
on that spheroid directly; :func:`grid_oracle_min` searches it by brute force
and is kept independent of them for cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.optimize import brentq

from . import bounds
from .compat import compatible
from .core import TAU_POS, bloch
from .errors import ErrorPoint, Measure

_SAMPLE_CHUNK = 1 << 17


@dataclass(frozen=True)
class OptimizerConfig:
    grid_n: int = 256
    max_iter: int = 10_000
    conv_tol: float = 1e-13
    seed: int = 0

    def __post_init__(self):
        if self.grid_n < 32:
            raise ValueError(f"grid_n must be >= 32, got {self.grid_n}")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")


DEFAULT_CONFIG = OptimizerConfig()


@dataclass
class IterationTrace:
    """Alternating-minimisation history: ``pairs[k] = (c_k, d_k)``."""

    measure: Measure
    pairs: list = field(default_factory=list)
    converged: bool = False

    @property
    def limit(self) -> tuple[np.ndarray, np.ndarray]:
        return self.pairs[-1]

    @property
    def iterations(self) -> int:
        return len(self.pairs)


class ConvergenceError(RuntimeError):
    def __init__(self, trace: IterationTrace):
        super().__init__(f"no convergence after {trace.iterations} iterations")
        self.trace = trace


def _measure(m: Union[Measure, str]) -> Measure:
    return Measure(m.value if isinstance(m, Measure) else m)


def _frame(c: np.ndarray, b: np.ndarray):
    """Orthonormal frame: e1 along c (or b when c = 0), e2 towards b, e3 normal."""
    s = float(np.linalg.norm(c))
    e1 = c / s if s > 1e-15 else b / np.linalg.norm(b)
    perp = b - (b @ e1) * e1
    n = float(np.linalg.norm(perp))
    if n < 1e-15:
        helper = np.eye(3)[int(np.argmin(np.abs(e1)))]
        perp = helper - (helper @ e1) * e1
        n = float(np.linalg.norm(perp))
    e2 = perp / n
    return s, e1, e2, np.cross(e1, e2)


def min_D_given_c(c, b, cfg: OptimizerConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Partner ``d`` closest to ``b`` among those jointly measurable with ``c``.

    Euclidean projection of ``b`` onto the spheroid, reduced to the ellipse in
    the plane of ``c`` and ``b`` and solved through its Lagrange multiplier.
    """
    c, b = np.asarray(c, float), np.asarray(b, float)
    s, e1, e2, _ = _frame(c, b)
    x, y = float(b @ e1), float(b @ e2)
    minor2 = 1.0 - s * s
    if minor2 <= 1e-15 or y <= 1e-15:
        # degenerate segment, or b on the axis where the nearest point is a tip
        return bloch(np.clip(x, -1.0, 1.0) * e1)
    if x * x + y * y / minor2 <= 1.0:
        return bloch(b)

    def excess(t):
        return (x / (1.0 + t)) ** 2 + (y * math.sqrt(minor2) / (minor2 + t)) ** 2 - 1.0

    hi = 1.0
    while excess(hi) > 0:
        hi *= 2.0
    t = brentq(excess, 0.0, hi, xtol=1e-16, maxiter=500)
    return _into_ball(x / (1.0 + t) * e1 + minor2 * y / (minor2 + t) * e2)


def min_noise_given_c(c, b, cfg: OptimizerConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Partner ``d`` maximising ``b.d`` (minimal noise on ``b``) under compatibility with ``c``.

    Linear objective over the spheroid ``d^T Q^-2 d <= 1`` with
    ``Q^2 = (1 - |c|^2) I + c c^T``: the maximiser is ``Q^2 b / sqrt(b^T Q^2 b)``.
    """
    c, b = np.asarray(c, float), np.asarray(b, float)
    q2b = (1.0 - c @ c) * b + (b @ c) * c
    norm2 = float(b @ q2b)
    if norm2 <= 1e-30:
        # unit c orthogonal to b: every admissible d gives b.d = 0
        return bloch(np.zeros(3))
    return _into_ball(q2b / math.sqrt(norm2))


def _into_ball(v: np.ndarray) -> np.ndarray:
    # a unit-norm result may land one ulp outside the ball; pull it back
    n = float(np.linalg.norm(v))
    if n > 1.0:
        v = v / n
        while np.linalg.norm(v) > 1.0:
            v = v * (1.0 - 2.0**-53)
    return bloch(v)


def _objective(measure: Measure, b: np.ndarray, d: np.ndarray) -> np.ndarray:
    diff = b - d
    dist2 = np.einsum("...i,...i->...", diff, diff)
    if measure is Measure.METRIC:
        return np.sqrt(dist2)
    return np.sqrt(np.clip(dist2 + 1.0 - np.einsum("...i,...i->...", d, d), 0.0, None))


def grid_oracle_min(c, b, objective: Union[Measure, str], grid_n: int) -> tuple[np.ndarray, float]:
    """Brute-force minimum over a polar grid of the spheroid surface and interior shells.

    Doubling ``grid_n`` refines the grid by nesting, so the value never gets worse.
    """
    if grid_n < 32:
        raise ValueError("grid_n must be >= 32")
    measure = _measure(objective)
    c, b = np.asarray(c, float), np.asarray(b, float)
    s, e1, e2, e3 = _frame(c, b)
    minor = math.sqrt(max(0.0, 1.0 - s * s))
    u = np.pi * np.arange(grid_n + 1) / grid_n
    v = 2.0 * np.pi * np.arange(grid_n) / grid_n
    n_shells = grid_n // 8
    radii = np.arange(0, n_shells + 1) / n_shells
    cu, su = np.cos(u)[:, None], np.sin(u)[:, None]
    cv, sv = np.cos(v)[None, :], np.sin(v)[None, :]
    surface = (
        cu[..., None] * e1
        + minor * su[..., None] * (cv[..., None] * e2 + sv[..., None] * e3)
    ).reshape(-1, 3)
    best_val, best_d = math.inf, None
    for r in radii:
        pts = r * surface
        vals = _objective(measure, b, pts)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_d = float(vals[i]), pts[i]
    if not compatible(c, best_d, tol=1e-9):
        raise AssertionError("grid point left the compatibility region")
    return bloch(best_d), best_val


def conditional_min(measure: Union[Measure, str], c, target, cfg: OptimizerConfig = DEFAULT_CONFIG):
    if _measure(measure) is Measure.METRIC:
        return min_D_given_c(c, target, cfg)
    return min_noise_given_c(c, target, cfg)


def pair_errors(measure: Union[Measure, str], a, b, c, d) -> tuple[float, float]:
    m = _measure(measure)
    a, b, c, d = (np.asarray(x, float) for x in (a, b, c, d))
    return float(_objective(m, a, c)), float(_objective(m, b, d))


def alternate_minimize(
    measure: Union[Measure, str],
    a,
    b,
    c0,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> IterationTrace:
    """Alternately optimise ``d`` given ``c`` and ``c`` given ``d``.

    Both errors are non-increasing along the trace.  Stops when neither vector
    moves by more than ``conv_tol``; for the metric error a movement of the
    error pair below ``10 * conv_tol`` also counts as converged.
    """
    m = _measure(measure)
    a, b = bloch(a), bloch(b)
    if a @ b < -TAU_POS:
        raise ValueError("targets must satisfy a.b >= 0")
    c = bloch(c0)
    if np.linalg.norm(c) > 1.0 + TAU_POS:
        raise ValueError("c0 must lie in the unit ball")
    trace = IterationTrace(m)
    d = conditional_min(m, c, b, cfg)
    trace.pairs.append((c, d))
    for _ in range(cfg.max_iter):
        c_next = conditional_min(m, d, a, cfg)
        d_next = conditional_min(m, c_next, b, cfg)
        step = max(np.linalg.norm(c_next - c), np.linalg.norm(d_next - d))
        moved = step
        if m is Measure.METRIC:
            before = pair_errors(m, a, b, c, d)
            after = pair_errors(m, a, b, c_next, d_next)
            moved = min(step, max(abs(after[0] - before[0]), abs(after[1] - before[1])) / 10.0)
        c, d = c_next, d_next
        trace.pairs.append((c, d))
        if moved < cfg.conv_tol:
            trace.converged = True
            return trace
    raise ConvergenceError(trace)


def lagrange_residual(a, b, c, d) -> tuple[float, float]:
    """Sines of the angles between ``a - c`` and ``c - M d``, and ``b - d`` and ``d - M c``.

    Both vanish at stationary points of the boundary-constrained problem.
    """
    a, b, c, d = (np.asarray(x, float) for x in (a, b, c, d))
    M = float(c @ d)

    def sine(u, v):
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu < 1e-14 or nv < 1e-14:
            raise ValueError("degenerate residual: zero-length vector")
        return float(np.linalg.norm(np.cross(u, v)) / (nu * nv))

    return sine(a - c, c - M * d), sine(b - d, d - M * c)


def noise_stationary_targets(c, d) -> tuple[np.ndarray, np.ndarray]:
    """Targets for which the boundary pair ``(c, d)`` is stationary for the noise measure."""
    c, d = np.asarray(c, float), np.asarray(d, float)
    M = float(c @ d)
    u, v = c - M * d, d - M * c
    return bloch(u / np.linalg.norm(u)), bloch(v / np.linalg.norm(v))


def family_membership(a, b, c, d) -> tuple[float, float]:
    """Distance of ``(c, d)`` from the equal-noise family for orthogonal targets.

    Returns ``(lambda, residual)`` where ``residual`` is the largest deviation
    from ``(a* + lambda b*, b* + lambda a*)`` together with the unit-norm
    defect of ``m = a* + b*``.
    """
    a, b, c, d = (np.asarray(x, float) for x in (a, b, c, d))
    a_star, b_star = (a @ c) * a, (b @ d) * b
    m = a_star + b_star
    nb, na = b_star @ b_star, a_star @ a_star
    lam = float((c @ b_star) / nb) if nb > na else float((d @ a_star) / na)
    resid = max(
        np.linalg.norm(c - (a_star + lam * b_star)),
        np.linalg.norm(d - (b_star + lam * a_star)),
        abs(np.linalg.norm(m) - 1.0),
    )
    return lam, float(resid)


def targets(theta: float) -> tuple[np.ndarray, np.ndarray]:
    return bloch((1.0, 0.0, 0.0)), bloch((math.cos(theta), math.sin(theta), 0.0))


def _ball(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, 3))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random(n)[:, None] ** (1.0 / 3.0)


def sample_compatible_pairs(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform pairs in the unit ball; incompatible ones are scaled onto the boundary."""
    rng = np.random.default_rng(seed)
    cs, ds = [], []
    for start in range(0, n, _SAMPLE_CHUNK):
        k = min(_SAMPLE_CHUNK, n - start)
        c, d = _ball(rng, k), _ball(rng, k)
        total = np.linalg.norm(c + d, axis=1) + np.linalg.norm(c - d, axis=1)
        scale = np.where(total > 2.0, 2.0 / total, 1.0)[:, None]
        cs.append(c * scale)
        ds.append(d * scale)
    return np.concatenate(cs), np.concatenate(ds)


def sample_errors(
    measure: Union[Measure, str], theta: float, n_samples: int, cfg: OptimizerConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, np.ndarray]:
    """Array form of :func:`sample_admissible_region`."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    m = _measure(measure)
    a, b = targets(theta)
    c, d = sample_compatible_pairs(n_samples, cfg.seed)
    return _objective(m, a, c), _objective(m, b, d)


def sample_admissible_region(
    measure: Union[Measure, str], theta: float, n_samples: int, cfg: OptimizerConfig = DEFAULT_CONFIG
) -> list[ErrorPoint]:
    m = _measure(measure)
    e_a, e_b = sample_errors(m, theta, n_samples, cfg)
    return [ErrorPoint(float(x), float(y), m) for x, y in zip(e_a, e_b)]


def metric_boundary_table(theta: float, n: int = 8193) -> tuple[np.ndarray, np.ndarray]:
    pts = bounds.yu_oh_curve(theta, n)
    x = np.array([p.d_a for p in pts])[::-1]
    y = np.array([p.d_b for p in pts])[::-1]
    return x, y


def region_margin(measure: Union[Measure, str], theta: float, e_a, e_b) -> np.ndarray:
    """Signed distance-like margin above the optimal boundary (negative = undercut).

    Metric: vertical gap to the boundary curve.  Noise: ``lhs - sin^2 theta``.
    """
    m = _measure(measure)
    e_a, e_b = np.asarray(e_a, float), np.asarray(e_b, float)
    if m is Measure.NOISE:
        return bounds.branciard_margin(e_a, e_b, theta)
    x, y = metric_boundary_table(theta)
    floor = np.where(e_a >= math.sin(theta), 0.0, np.interp(e_a, x, y))
    return e_b - floor
