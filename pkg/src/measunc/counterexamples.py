"""Worked cases where zero noise coexists with a poor approximation.

Each ``run_*`` function builds its inputs, evaluates the relevant quantities
and returns a :class:`CounterexampleReport`.  Failed checks are recorded in the
report, never raised.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np

from .compat import post_process
from .core import (
    TAU_NUM,
    DensityOperator,
    DichotomicPovm,
    DiscretePovm,
    QubitOperator,
    anticommutator,
    bloch,
    moment,
    probability,
    spectral_povm,
    unit,
)
from .errors import (
    local_uniform_error_sq,
    metric_error_general,
    noise_biased,
    noise_biased_sq,
    noise_general,
    noise_general_sq,
)
from .io import operator_to_json, povm_to_json

TAU_PROB = 1e-12
TAU_REPORT = 1e-12


class ZeroProbabilityError(ValueError):
    def __init__(self, outcome: float, p: float):
        super().__init__(f"outcome {outcome!r} has probability {p:.3g} <= {TAU_PROB}")
        self.outcome = outcome


@dataclass
class Check:
    label: str
    expected: Any
    actual: Any
    passed: bool
    claim: str
    relation: str = "=="
    tol: Optional[float] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["paper_ref"] = d.pop("claim")
        return d


@dataclass
class CounterexampleReport:
    name: str
    inputs: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.assertions)

    def close(self, label, expected, actual, claim, tol=TAU_REPORT):
        expected, actual = float(expected), float(actual)
        self.assertions.append(
            Check(label, expected, actual, abs(actual - expected) <= tol, claim, "==", tol)
        )

    def positive(self, label, actual, claim):
        actual = float(actual)
        self.assertions.append(Check(label, 0.0, actual, actual > 0.0, claim, ">"))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "inputs": self.inputs,
            "quantities": self.quantities,
            "assertions": [c.to_dict() for c in self.assertions],
        }


def hall_optimal_f(E: DiscretePovm, A: QubitOperator, state: DensityOperator) -> dict:
    """Noise-minimising relabelling ``m -> tr[{E(m), A} rho] / (2 tr[E(m) rho])``."""
    f = {}
    for m, e in E.items():
        p = e.expectation(state)
        if p <= TAU_PROB:
            raise ZeroProbabilityError(m, p)
        f[m] = anticommutator(e, A).expectation(state) / (2.0 * p)
    return f


def three_outcome_setup():
    """Rank-one three-outcome POVM, target and state with ``g = 2 - sqrt 2``."""
    g = 2.0 - math.sqrt(2.0)
    s = 1.0 / math.sqrt(2.0)
    w = 2.0 * (1.0 - g)
    E = DiscretePovm(
        (1, 2, 3),
        (
            QubitOperator(g, (g, 0.0, 0.0)),
            QubitOperator(g, (0.0, g, 0.0)),
            QubitOperator(w, (-w * s, -w * s, 0.0)),
        ),
    )
    A = QubitOperator.from_pauli(0.0, (g / 2, -g / 2, 0.0))
    rho = DensityOperator((-s, -s, 0.0))
    return g, E, A, rho


def run_three_outcome_example() -> CounterexampleReport:
    g, E, A, rho = three_outcome_setup()
    rep = CounterexampleReport("three-outcome")
    rep.inputs = {
        "gamma": g,
        "E": povm_to_json(E),
        "A": operator_to_json(A),
        "rho": rho.r.tolist(),
    }

    rank_gap = max(abs(e.alpha - np.linalg.norm(e.vec)) for e in E.effects)
    total = sum(E.effects, QubitOperator.zero())
    sum_gap = max(abs(total.alpha - 2.0), float(np.max(np.abs(total.vec))))
    rep.close("rank-one effects (alpha - |vec|)", 0.0, rank_gap,
              "the three effects are positive rank-one operators")
    rep.close("effects sum to identity", 0.0, sum_gap, "the three effects form a POVM")
    rep.close("gamma = sqrt2 (1 - gamma)", g, math.sqrt(2.0) * (1.0 - g),
              "the construction relies on gamma = sqrt2 (1 - gamma)")

    f = hall_optimal_f(E, A, rho)
    rep.quantities["hall_f"] = {str(int(m)): v for m, v in f.items()}
    for m, want in zip(E.outcomes, (1.0, -1.0, 0.0)):
        rep.close(f"optimal relabelling f({int(m)})", want, f[m],
                  "the optimal relabelling is f = (1, -1, 0)")

    C = post_process(E, {1: 1.0, 2: -1.0, 3: 0.0})
    C1 = moment(C, 1)
    rep.quantities["C1"] = operator_to_json(C1)
    rep.close("C[1] - A (largest Bloch component)", 0.0,
              max(abs(C1.alpha - A.alpha), float(np.max(np.abs(C1.vec - A.vec)))),
              "the first moment of the relabelled POVM equals A")

    eps_sq = noise_general_sq(A, C, rho)
    rep.quantities["noise_sq"] = eps_sq
    rep.close("noise squared", 0.0, eps_sq, "the noise of C relative to A vanishes")

    target = spectral_povm(A)
    claim = "the target and approximator statistics differ strongly"
    for m, want in zip(target.outcomes, (0.5, 0.5)):
        rep.close(f"p_A({'+' if m > 0 else '-'})", want, probability(target, m, rho), claim)
    rep.close("p_C(+1)", g * g / 4, probability(C, 1, rho), claim)
    rep.close("p_C(-1)", g * g / 4, probability(C, -1, rho), claim)
    rep.close("p_C(0)", 2.0 * (1.0 - g), probability(C, 0, rho), claim)

    # the target's eigenvalues carry the labels +-1 by sign; outcome 0 never occurs
    hi, lo = target.effects
    embedded = DiscretePovm((1.0, -1.0, 0.0), (hi, lo, QubitOperator.zero()))
    D = metric_error_general(embedded, C)
    rep.quantities["metric_error"] = D
    rep.positive("metric error of C against the embedded target", D,
                 "a state-independent error measure sees the mismatch")
    return rep


def run_biased_zero_noise(gammas=(0.1, 0.25, 0.5, 0.75, 1.0), delta: float = 1e-4) -> CounterexampleReport:
    """Biased dichotomic approximators with ``|c| = 1 - gamma`` along ``a``."""
    a = unit((1.0, 2.0, 2.0))
    # a unit direction orthogonal to a, for rotations
    q = unit(np.cross(a, (1.0, 0.0, 0.0)))
    rotated = math.cos(delta) * a + math.sin(delta) * q
    rep = CounterexampleReport("biased")
    rep.inputs = {"a": a.tolist(), "gammas": list(gammas), "rotation": delta}
    on_axis = DensityOperator(a)
    A_minus = QubitOperator(1.0, -a)
    for gamma in gammas:
        C = DichotomicPovm(gamma, (1.0 - gamma) * a)
        tag = f"gamma={gamma:g}"
        rep.close(f"{tag}: noise squared at r=a", 0.0, noise_biased_sq(a, C, on_axis),
                  "zero noise needs r = a and c = |c| a with |c| + gamma = 1")
        rep.close(f"{tag}: general noise squared at r=a", 0.0,
                  noise_general_sq(QubitOperator(0.0, 2.0 * a), C, on_axis),
                  "zero noise needs r = a and c = |c| a with |c| + gamma = 1")
        diff = C.effect(-1) - (1.0 - gamma) * A_minus
        rep.close(f"{tag}: C- - |c| A-", 0.0,
                  max(abs(diff.alpha), float(np.max(np.abs(diff.vec)))),
                  "the minus effect is a multiple of the target's minus projection")
        rep.positive(f"{tag}: noise with rotated state",
                     noise_biased(a, C, DensityOperator(rotated)),
                     "moving the state off the eigenvector gives positive noise")
        if gamma < 1.0:
            Crot = DichotomicPovm(gamma, (1.0 - gamma) * rotated)
            rep.positive(f"{tag}: noise with rotated c", noise_biased(a, Crot, on_axis),
                         "tilting c away from a gives positive noise")
    half = DichotomicPovm(0.5, 0.5 * a)
    rep.close("gamma=0.5: noise squared at r=-a", 2.0,
              noise_biased_sq(a, half, DensityOperator(-a)),
              "the other eigenstate is approximated badly")
    return rep


def commuting_povm(a, c: float, bins, labels) -> DiscretePovm:
    """``{I - c A-} U {c_k A-}`` with outcome 1 on the first effect."""
    a = unit(a)
    if abs(sum(bins) - c) > TAU_NUM:
        raise ValueError("bins must sum to c")
    A_minus = QubitOperator(1.0, -a)
    effects = [QubitOperator.identity() - c * A_minus] + [ck * A_minus for ck in bins]
    return DiscretePovm((1.0, *labels), tuple(effects))


def run_n_outcome_commuting(seed: int = 7, n_random: int = 6) -> CounterexampleReport:
    a = unit((0.3, -0.5, 0.8))
    target = QubitOperator(0.0, 2.0 * a)
    plus, minus = DensityOperator(a), DensityOperator(-a)
    off = DensityOperator(unit(np.cross(a, (0.0, 0.0, 1.0))))
    rng = np.random.default_rng(seed)

    cases = [(0.0, (), ()), (0.5, (0.25, 0.25), (7.0, -3.0))]
    for _ in range(n_random):
        c = float(rng.uniform(0.05, 0.95))
        k = int(rng.integers(1, 5))
        bins = tuple(float(x) for x in c * rng.dirichlet(np.ones(k)))
        labels = tuple(float(x) for x in rng.choice(np.arange(-9, 10) + 0.5, k, replace=False))
        cases.append((c, bins, labels))

    rep = CounterexampleReport("n-outcome")
    rep.inputs = {"a": a.tolist(), "seed": seed, "cases": [
        {"c": c, "bins": list(b), "labels": list(l)} for c, b, l in cases
    ]}
    claim = "C+ = I - c A- with arbitrary labels on the c_k A- gives zero noise on psi+"
    for i, (c, bins, labels) in enumerate(cases):
        C = commuting_povm(a, c, bins, labels)
        tag = f"case {i} (c={c:.3g}, {len(bins)} bins)"
        rep.close(f"{tag}: noise squared on psi+", 0.0,
                  noise_general_sq(target, C, plus), claim, TAU_NUM)
        if labels:
            shuffled = commuting_povm(a, c, bins, tuple(x + 11.0 for x in labels[::-1]))
            rep.close(f"{tag}: relabelled noise squared on psi+", 0.0,
                      noise_general_sq(target, shuffled, plus), claim, TAU_NUM)
        if c > 0:
            rep.positive(f"{tag}: noise on psi-", noise_general(target, C, minus),
                         "the approximation is poor away from psi+")
            rep.positive(f"{tag}: noise on a non-eigenstate", noise_general(target, C, off),
                         "the approximation is poor away from psi+")
    return rep


def run_ebar_discontinuity(angles=(1e-2, 1e-4, 1e-6)) -> CounterexampleReport:
    """``eps_bar`` of the trivial approximator jumps from 0 to 4 off the eigenstate."""
    a = bloch((0.0, 0.0, 1.0))
    trivial = DichotomicPovm(1.0, (0.0, 0.0, 0.0))
    rep = CounterexampleReport("ebar")
    rep.inputs = {"a": a.tolist(), "C": povm_to_json(trivial), "angles": list(angles)}
    claim = "eps_bar squared jumps from 0 to 4"
    rep.close("eps_bar^2 at r=a", 0.0, local_uniform_error_sq(a, trivial, DensityOperator(a)), claim)
    for t in angles:
        r = (math.sin(t), 0.0, math.cos(t))
        rep.close(f"eps_bar^2 at r rotated by {t:g} rad", 4.0,
                  local_uniform_error_sq(a, trivial, DensityOperator(r)), claim)
    exact = DichotomicPovm.symmetric(a)
    for r in (a, -a, (1.0, 0.0, 0.0), (0.0, 0.6, 0.0)):
        rep.close(f"eps_bar^2 of C = A at r={tuple(float(x) for x in r)}", 0.0,
                  local_uniform_error_sq(a, exact, DensityOperator(r)),
                  "a perfect approximator has eps_bar = 0")
    return rep


EXAMPLES = {
    "three-outcome": run_three_outcome_example,
    "biased": run_biased_zero_noise,
    "n-outcome": run_n_outcome_commuting,
    "ebar": run_ebar_discontinuity,
}
