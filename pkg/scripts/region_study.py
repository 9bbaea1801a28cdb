"""Monte Carlo view of the achievable error region against the optimal boundaries.

For each target angle and error measure, samples compatible approximator pairs,
reports the smallest margin above the boundary and how many samples fall
within a band of it, and writes a thinned point cloud for plotting.
"""
import argparse
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from measunc.io import csv_text
from measunc.optimize import OptimizerConfig, region_margin, sample_errors


@dataclass
class RegionConfig:
    thetas: tuple = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)
    measures: tuple = ("metric", "noise")
    samples: int = 1_000_000
    seed: int = 0
    band: float = 1e-2
    keep: int = 5000
    out_dir: Path = field(default_factory=lambda: Path("results/region"))


def main(cfg: RegionConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for measure in cfg.measures:
        for k, theta in enumerate(cfg.thetas):
            t0 = time.perf_counter()
            e_a, e_b = sample_errors(measure, theta, cfg.samples, OptimizerConfig(seed=cfg.seed + k))
            margin = region_margin(measure, theta, e_a, e_b)
            near = int(np.count_nonzero(margin < cfg.band))
            summary.append((measure, theta, cfg.samples, float(margin.min()), near,
                            time.perf_counter() - t0))
            step = max(1, cfg.samples // cfg.keep)
            rows = zip(e_a[::step].tolist(), e_b[::step].tolist(), margin[::step].tolist())
            name = f"{measure}_theta{theta:.4f}.csv"
            (cfg.out_dir / name).write_text(csv_text(("e_a", "e_b", "margin"), rows))
            print(f"{measure:6s} theta={theta:.4f} min margin {margin.min():+.3e}, "
                  f"{near} samples within {cfg.band:g}")
    header = ("measure", "theta", "samples", "min_margin", "near_boundary", "seconds")
    (cfg.out_dir / "summary.csv").write_text(csv_text(header, summary))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=RegionConfig.samples)
    p.add_argument("--seed", type=int, default=RegionConfig.seed)
    p.add_argument("--out-dir", type=Path, default=Path("results/region"))
    main(RegionConfig(**vars(p.parse_args())))
