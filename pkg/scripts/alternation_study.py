"""Where does alternating minimisation end up, for both error measures?

Runs the alternation from random starts, both inside the plane of the targets
and in full 3-D, and tabulates the limit: its norm, its out-of-plane tilt, and
for orthogonal targets its distance from the equal-noise family.
"""
import argparse
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from measunc.io import csv_text
from measunc.optimize import (
    ConvergenceError,
    OptimizerConfig,
    alternate_minimize,
    family_membership,
    pair_errors,
    targets,
)


@dataclass
class AlternationConfig:
    thetas: tuple = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)
    measures: tuple = ("noise", "metric")
    starts: int = 20
    seed: int = 0
    max_iter: int = 10_000
    out: Path = field(default_factory=lambda: Path("results/alternation.csv"))


def random_start(rng, planar: bool) -> np.ndarray:
    v = rng.normal(size=3)
    if planar:
        v[2] = 0.0
    dim = 2 if planar else 3
    return v / np.linalg.norm(v) * rng.uniform() ** (1 / dim)


def main(cfg: AlternationConfig) -> None:
    rng = np.random.default_rng(cfg.seed)
    opt = OptimizerConfig(max_iter=cfg.max_iter, seed=cfg.seed)
    rows = []
    for measure in cfg.measures:
        for theta in cfg.thetas:
            a, b = targets(theta)
            for planar in (True, False):
                for _ in range(cfg.starts):
                    c0 = random_start(rng, planar)
                    try:
                        trace = alternate_minimize(measure, a, b, c0, opt)
                    except ConvergenceError as exc:
                        trace = exc.trace
                    c, d = trace.limit
                    fam = family_membership(a, b, c, d)[1] if theta == math.pi / 2 else float("nan")
                    rows.append((measure, theta, planar, trace.converged, trace.iterations,
                                 float(np.linalg.norm(c)), float(abs(c[2])), fam,
                                 *pair_errors(measure, a, b, c, d)))
    header = ("measure", "theta", "planar_start", "converged", "iterations",
              "norm_c", "tilt_c", "family_residual", "e_a", "e_b")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(csv_text(header, rows))
    for measure in cfg.measures:
        for planar in (True, False):
            sel = [r for r in rows if r[0] == measure and r[2] == planar]
            print(f"{measure:6s} {'planar' if planar else '3-D   '} starts: "
                  f"converged {sum(r[3] for r in sel)}/{len(sel)}, "
                  f"norm in [{min(r[5] for r in sel):.6f}, {max(r[5] for r in sel):.6f}], "
                  f"max tilt {max(r[6] for r in sel):.3g}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--starts", type=int, default=AlternationConfig.starts)
    p.add_argument("--seed", type=int, default=AlternationConfig.seed)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=AlternationConfig.max_iter)
    p.add_argument("--out", type=Path, default=Path("results/alternation.csv"))
    main(AlternationConfig(**vars(p.parse_args())))
