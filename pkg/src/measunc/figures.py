"""Tabulated data for the standard tradeoff plots, each with built-in consistency checks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .compat import compat_boundary_residual, compatible
from .counterexamples import Check, CounterexampleReport
from .core import TAU_NUM
from .errors import noise_symmetric
from .optimize import targets

THETA_STEPS = tuple(k * math.pi / 12 for k in range(1, 7))


@dataclass
class FigureData:
    header: tuple
    rows: list
    checks: CounterexampleReport

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def records(self) -> list[dict]:
        return [dict(zip(self.header, r)) for r in self.rows]


def branch_curves(theta: float = math.pi / 3, n: int = 101) -> FigureData:
    """Boundary curves for every sign branch ``(mu, nu)``."""
    header = ("theta", "mu", "nu", "phi", "M2", "d_a", "d_b")
    rows, rep = [], CounterexampleReport("figure-1")
    worst_form, worst_order = 0.0, -math.inf
    for phi in np.linspace(0.0, bounds.HALF_PI, n):
        pts = {}
        for mu in (1, -1):
            for nu in (1, -1):
                p = bounds.yu_oh_point(theta, phi, mu, nu)
                pts[(mu, nu)] = p
                rows.append((theta, mu, nu, phi, p.M2, p.d_a, p.d_b))
        best = pts[(1, 1)]
        general_a = math.sqrt(1.0 - best.M2 * math.cos(phi) ** 2) - math.sin(phi)
        general_b = math.sqrt(1.0 - best.M2 * math.sin(phi) ** 2) - math.cos(phi)
        worst_form = max(worst_form, abs(general_a - best.d_a), abs(general_b - best.d_b))
        worst_order = max(worst_order, best.d_a - pts[(-1, 1)].d_a, best.d_b - pts[(1, -1)].d_b)
    rep.close("closed form vs sign-branch form on (+,+)", 0.0, worst_form,
              "the simplified minimum branch matches the general root expression", TAU_NUM)
    rep.assertions.append(_le("(+,+) never above the flipped branches", worst_order, TAU_NUM))
    lo, hi = bounds.yu_oh_point(theta, 0.0), bounds.yu_oh_point(theta, bounds.HALF_PI)
    rep.close("phi=0 endpoint d_a", math.sin(theta), lo.d_a, "endpoint (sin theta, 0)")
    rep.close("phi=0 endpoint d_b", 0.0, lo.d_b, "endpoint (sin theta, 0)")
    rep.close("phi=pi/2 endpoint d_a", 0.0, hi.d_a, "endpoint (0, sin theta)")
    rep.close("phi=pi/2 endpoint d_b", math.sin(theta), hi.d_b, "endpoint (0, sin theta)")
    return FigureData(header, rows, rep)


def unsharpness_curves(n: int = 101, thetas=THETA_STEPS) -> FigureData:
    header = ("theta", "phi", "M2", "u_c", "u_d", "residual")
    rows, worst = [], 0.0
    for theta in thetas:
        for phi in np.linspace(0.0, bounds.HALF_PI, n):
            p = bounds.yu_oh_point(theta, phi)
            r = bounds.unsharpness_tradeoff(theta, phi)
            worst = max(worst, abs(r))
            rows.append((theta, phi, p.M2, p.u_c, p.u_d, r))
    rep = CounterexampleReport("figure-2")
    rep.close("max |unsharpness tradeoff residual|", 0.0, worst,
              "sin theta is recovered from M^2 and phi", TAU_NUM)
    return FigureData(header, rows, rep)


def lambda_family(n: int = 21, lambdas=(0.0, 0.25, 0.5, 0.75, 1.0)) -> FigureData:
    """Equal-noise lines for orthogonal targets."""
    theta = bounds.HALF_PI
    a, b = targets(theta)
    header = ("phi", "lambda", "c_x", "c_y", "d_x", "d_y", "eps_a", "eps_b",
              "compat_residual", "lhs_margin")
    rows, worst_eps, worst_margin, all_compat = [], 0.0, 0.0, True
    for phi in np.linspace(0.0, theta, n):
        m = bounds.branciard_sharp(a, b, phi)
        ea0, eb0 = noise_symmetric(a, m), noise_symmetric(b, m)
        for lam in lambdas:
            c, d = bounds.branciard_family(a, b, m, lam)
            ea, eb = noise_symmetric(a, c), noise_symmetric(b, d)
            margin = bounds.branciard_lhs(ea, eb, theta) - 1.0
            worst_eps = max(worst_eps, abs(ea - ea0), abs(eb - eb0))
            worst_margin = max(worst_margin, abs(margin))
            all_compat &= compatible(c, d)
            rows.append((phi, lam, c[0], c[1], d[0], d[1], ea, eb,
                         compat_boundary_residual(c, d), margin))
    rep = CounterexampleReport("figure-4")
    rep.close("noise change along each line", 0.0, worst_eps,
              "every member of a line has the noise of its sharp endpoint", TAU_NUM)
    rep.close("max |lhs - sin^2 theta| on the lines", 0.0, worst_margin,
              "every member saturates the noise bound", TAU_NUM)
    rep.close("all members jointly measurable", 1.0, float(all_compat),
              "each line consists of compatible pairs")
    return FigureData(header, rows, rep)


def metric_comparison(n: int = 101, thetas=THETA_STEPS) -> FigureData:
    """Metric errors of the noise-optimal sharp scheme against the metric boundary."""
    header = ("theta", "phi", "d_a", "d_b_sharp", "d_b_boundary", "gap")
    rows, worst_neg, worst_end = [], 0.0, 0.0
    for theta in thetas:
        for phi in np.linspace(0.0, theta, n):
            da, db = bounds.branciard_metric_errors(theta, phi)
            floor = bounds.yu_oh_b_at(theta, da)
            gap = db - floor
            worst_neg = max(worst_neg, -gap)
            rows.append((theta, phi, da, db, floor, gap))
        end = bounds.branciard_metric_errors(theta, 0.0)[1] - bounds.yu_oh_b_at(theta, 0.0)
        worst_end = max(worst_end, abs(end - (2 * math.sin(theta / 2) - math.sin(theta))))
    rep = CounterexampleReport("figure-5")
    rep.close("largest undercut of the metric boundary", 0.0, worst_neg,
              "the sharp scheme never beats the metric boundary", TAU_NUM)
    rep.close("endpoint gap vs 2 sin(theta/2) - sin theta", 0.0, worst_end,
              "the curves separate at the endpoints by 2 sin(theta/2) - sin theta", TAU_NUM)
    return FigureData(header, rows, rep)


def noise_comparison(n: int = 101, thetas=THETA_STEPS) -> FigureData:
    """Noise-bound left side evaluated on the metric-optimal approximators."""
    header = ("theta", "phi", "eps_a", "eps_b", "lhs", "rhs", "margin")
    rows = []
    min_inner, worst_right = math.inf, 0.0
    for theta in thetas:
        a, b = targets(theta)
        rhs = math.sin(theta) ** 2
        for phi in np.linspace(0.0, bounds.HALF_PI, n):
            c, d = bounds.yu_oh_optimal_vectors(a, b, phi)
            ea, eb = noise_symmetric(a, c), noise_symmetric(b, d)
            lhs = bounds.branciard_lhs(ea, eb, theta)
            rows.append((theta, phi, ea, eb, lhs, rhs, lhs - rhs))
            if theta < bounds.HALF_PI - 1e-12:
                min_inner = min(min_inner, lhs - rhs)
            else:
                worst_right = max(worst_right, abs(lhs - rhs))
    rep = CounterexampleReport("figure-6")
    if min_inner < math.inf:
        rep.positive("min margin for theta < pi/2", min_inner,
                     "metric-optimal pairs are noise-suboptimal below pi/2")
    rep.close("max |margin| at theta = pi/2", 0.0, worst_right,
              "metric-optimal pairs saturate the noise bound at pi/2", TAU_NUM)
    return FigureData(header, rows, rep)


def _le(label: str, value: float, tol: float) -> Check:
    return Check(label, 0.0, float(value), value <= tol, label, "<=", tol)


FIGURES = {
    "1": branch_curves,
    "2": unsharpness_curves,
    "4": lambda_family,
    "5": metric_comparison,
    "6": noise_comparison,
}
