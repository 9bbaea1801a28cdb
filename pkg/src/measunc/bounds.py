"""Closed-form optimal error tradeoffs for two sharp qubit targets.

Targets ``a`` and ``b`` are unit Bloch vectors at angle ``theta`` (``cos theta = a.b``),
restricted to ``[0, pi/2]``.  The metric boundary is parameterised by the
unsharpness angle ``phi in [0, pi/2]``: ``tan phi = U(D)/U(C)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import TAU_NUM, bloch, unit

HALF_PI = math.pi / 2
_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class GeometryAngles:
    theta: float
    phi: float
    mu: int = 1
    nu: int = 1

    def __post_init__(self):
        _check_angle(self.theta, "theta")
        _check_angle(self.phi, "phi")
        if self.mu not in (1, -1) or self.nu not in (1, -1):
            raise ValueError("branch signs must be +1 or -1")


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    phi: float
    M: float
    d_a: float
    d_b: float
    u_c: float
    u_d: float

    @property
    def M2(self) -> float:
        return self.M * self.M


def _check_angle(x: float, name: str) -> float:
    if not (-_ANGLE_TOL <= x <= HALF_PI + _ANGLE_TOL):
        raise ValueError(f"{name} must lie in [0, pi/2], got {x}")
    return min(max(float(x), 0.0), HALF_PI)


def target_angle(a, b) -> float:
    """Angle between two unit targets; obtuse pairs are rejected."""
    cos = float(np.dot(a, b))
    if cos < -_ANGLE_TOL:
        raise ValueError(f"targets must have a.b >= 0, got {cos}")
    # atan2 keeps small angles that acos would round to zero
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), max(0.0, cos))


def mixing_sq(theta: float, phi: float) -> float:
    """``M^2 = cos^2 theta / (1 + sin theta sin 2phi)`` on the saturated boundary."""
    return math.cos(theta) ** 2 / (1.0 + math.sin(theta) * math.sin(2 * phi))


def yu_oh_point(theta: float, phi: float, mu: int = 1, nu: int = 1) -> BoundaryPoint:
    """Metric errors of the stationary pair with unsharpness angle ``phi``.

    ``mu = nu = +1`` is the minimum branch; other sign pairs evaluate the same
    stationarity solution with flipped signs and carry no optimality claim.
    """
    g = GeometryAngles(_check_angle(theta, "theta"), _check_angle(phi, "phi"), mu, nu)
    theta, phi = g.theta, g.phi
    sp, cp = math.sin(phi), math.cos(phi)
    if theta == 0.0:
        return BoundaryPoint(theta, phi, 1.0, 0.0, 0.0, 0.0, 0.0)
    st = math.sin(theta)
    root = math.sqrt(1.0 + st * math.sin(2 * phi))
    # sqrt(1 - M^2 cos^2 phi) and 1 - M^2 rewritten without cancellation near M^2 = 1
    d_a = (sp + st * cp) / root - mu * sp
    d_b = (cp + st * sp) / root - nu * cp
    M2 = mixing_sq(theta, phi)
    spread = math.sqrt(st * (st + math.sin(2 * phi))) / root
    return BoundaryPoint(theta, phi, math.sqrt(M2), d_a, d_b, spread * cp, spread * sp)


def yu_oh_from_unsharpness(u_c: float, u_d: float, theta: float) -> tuple[float, float]:
    if u_c < 0 or u_d < 0:
        raise ValueError("unsharpness values must be nonnegative")
    theta = _check_angle(theta, "theta")
    if u_c == 0 and u_d == 0:
        if theta == 0.0:
            return 0.0, 0.0
        raise ValueError("both approximators sharp: boundary angle undefined for theta > 0")
    st, ct = math.sin(theta), math.cos(theta)
    norm = math.hypot(u_c, u_d)
    xa = u_d + u_c * st
    xb = u_c + u_d * st
    d_a = xa / math.sqrt(xa * xa + (u_c * ct) ** 2) - u_d / norm
    d_b = xb / math.sqrt(xb * xb + (u_d * ct) ** 2) - u_c / norm
    return d_a, d_b


def unsharpness_tradeoff(theta: float, phi: float) -> float:
    """Residual of ``sin theta`` written as a function of ``M^2`` and ``phi``."""
    theta, phi = _check_angle(theta, "theta"), _check_angle(phi, "phi")
    M2 = mixing_sq(theta, phi)
    s2p = math.sin(2 * phi)
    rhs = -0.5 * M2 * s2p + math.sqrt(0.25 * M2 * M2 * s2p * s2p + 1.0 - M2)
    return math.sin(theta) - rhs


def linear_tradeoff_residual(theta: float, phi: float) -> float:
    """``d_a sin phi + d_b cos phi - (cos theta / M - 1)``; needs ``M > 0``."""
    theta, phi = _check_angle(theta, "theta"), _check_angle(phi, "phi")
    if theta >= HALF_PI:
        raise ValueError("linear tradeoff is undefined at theta = pi/2 (M = 0)")
    p = yu_oh_point(theta, phi)
    return p.d_a * math.sin(phi) + p.d_b * math.cos(phi) - (math.cos(theta) / p.M - 1.0)


def yu_oh_optimal_vectors(a, b, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Bloch vectors of the metric-optimal approximators at boundary angle ``phi``."""
    a, b = unit(a), unit(b)
    phi = _check_angle(phi, "phi")
    theta = target_angle(a, b)
    if theta < _ANGLE_TOL:
        return a, a
    p = yu_oh_point(theta, phi)
    sp, cp, st = math.sin(phi), math.cos(phi), math.sin(theta)
    spread = 1.0 - p.M2
    c = ((p.d_b + spread * cp) * sp * a + p.M * p.d_a * cp * b) / st
    d = ((p.d_a + spread * sp) * cp * b + p.M * p.d_b * sp * a) / st
    return bloch(c), bloch(d)


def yu_oh_curve(theta: float, n: int) -> list[BoundaryPoint]:
    return [yu_oh_point(theta, phi) for phi in np.linspace(0.0, HALF_PI, n)]


def yu_oh_b_at(theta: float, d_a: float) -> float:
    """Smallest metric error on ``b`` once the error on ``a`` is ``d_a``.

    Beyond ``d_a = sin theta`` the boundary sits at zero.
    """
    theta = _check_angle(theta, "theta")
    if d_a < 0:
        raise ValueError("d_a must be nonnegative")
    st = math.sin(theta)
    if d_a >= st:
        return 0.0
    if d_a == 0.0:
        return st
    # d_a decreases monotonically from sin(theta) at phi=0 to 0 at phi=pi/2
    phi = brentq(lambda p: yu_oh_point(theta, p).d_a - d_a, 0.0, HALF_PI, xtol=1e-15)
    return yu_oh_point(theta, phi).d_b


def branciard_lhs(eps_a: float, eps_b: float, theta: float) -> float:
    ta = 1.0 - eps_a * eps_a / 4.0
    tb = 1.0 - eps_b * eps_b / 4.0
    return (
        eps_a**2 * ta
        + eps_b**2 * tb
        + 2.0 * eps_a * eps_b * math.cos(theta) * math.sqrt(max(0.0, ta * tb))
    )


def branciard_satisfied(eps_a: float, eps_b: float, theta: float, tol: float = TAU_NUM) -> bool:
    return branciard_lhs(eps_a, eps_b, theta) >= math.sin(theta) ** 2 - tol


def branciard_margin(eps_a, eps_b, theta: float):
    """Vectorised ``lhs - sin^2 theta`` with errors above ``sqrt 2`` capped.

    ``eps sqrt(1 - eps^2/4)`` is the sine of the angle between target and
    approximator direction; past a right angle it is held at 1, the regime
    where the inequality no longer constrains anything.
    """
    def sine(e):
        e = np.asarray(e, dtype=float)
        e2 = e * e
        return np.where(e2 >= 2.0, 1.0, e * np.sqrt(np.clip(1.0 - e2 / 4.0, 0.0, None)))

    sa, sb = sine(eps_a), sine(eps_b)
    return sa * sa + sb * sb + 2.0 * math.cos(theta) * sa * sb - math.sin(theta) ** 2


def _plane_basis(a, b) -> tuple[np.ndarray, np.ndarray, float]:
    a, b = unit(a), unit(b)
    theta = target_angle(a, b)
    perp = b - (a @ b) * a
    n = np.linalg.norm(perp)
    e2 = perp / n if n > 1e-15 else np.zeros(3)
    return a, e2, theta


def branciard_sharp(a, b, phi: float) -> np.ndarray:
    """Unit vector in span{a, b} at angle ``phi`` from ``a`` towards ``b``.

    ``phi`` is measured from ``a`` and must lie in ``[0, theta]``.
    """
    e1, e2, theta = _plane_basis(a, b)
    if not (-_ANGLE_TOL <= phi <= theta + _ANGLE_TOL):
        raise ValueError(f"phi={phi} outside [0, theta={theta}]")
    phi = min(max(phi, 0.0), theta)
    if theta < _ANGLE_TOL:
        return e1
    return bloch(math.cos(phi) * e1 + math.sin(phi) * e2)


def branciard_sharp_errors(theta: float, phi: float) -> tuple[float, float]:
    """Noise values of the sharp approximator at offset ``phi`` from ``a``."""
    return 2.0 * abs(math.sin(phi / 2)), 2.0 * abs(math.sin((theta - phi) / 2))


def branciard_family(a, b, m, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Equal-noise compatible pair ``(a* + lam b*, b* + lam a*)`` for orthogonal targets."""
    a, b, m = (np.asarray(v, dtype=float) for v in (a, b, m))
    if abs(a @ b) > 1e-9:
        raise ValueError(f"the family needs orthogonal targets, a.b = {a @ b:.3g}")
    if abs(np.linalg.norm(m) - 1.0) > 1e-9 or abs(m @ np.cross(a, b)) > 1e-9:
        raise ValueError("m must be a unit vector in span{a, b}")
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    a_star = (a @ m) * a
    b_star = (b @ m) * b
    return bloch(a_star + lam * b_star), bloch(b_star + lam * a_star)


def branciard_metric_errors(theta: float, phi_offset: float) -> tuple[float, float]:
    """Metric errors of the sharp noise-optimal approximator (offset from ``a``)."""
    theta = _check_angle(theta, "theta")
    if not (-_ANGLE_TOL <= phi_offset <= theta + _ANGLE_TOL):
        raise ValueError(f"offset {phi_offset} outside [0, {theta}]")
    return 2.0 * math.sin(max(phi_offset, 0.0) / 2), 2.0 * math.sin(max(theta - phi_offset, 0.0) / 2)
