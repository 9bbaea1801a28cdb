"""Command-line interface: ``python -m measunc <subcommand> ...``.

Primary output (CSV or JSON) goes to ``--out`` or stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from pathlib import Path

import numpy as np

from . import bounds, optimize
from .compat import compat_boundary_residual, compat_sum, compatible, joint_observable
from .core import DensityOperator, DichotomicPovm, InvalidOperatorError, as_discrete
from .counterexamples import EXAMPLES
from .errors import (
    Measure,
    local_uniform_error,
    metric_error_general,
    noise_general,
)
from .figures import FIGURES
from .io import (
    SchemaError,
    as_symmetric_direction,
    csv_text,
    json_text,
    load_povm,
    operator_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "acos": math.acos, "atan": math.atan}


class UsageError(Exception):
    pass


def real_expr(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``pi/3`` or ``acos(1/sqrt(2))``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression element {ast.dump(node)}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise argparse.ArgumentTypeError(f"cannot evaluate {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return value


def vector(text: str) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return np.array([real_expr(p) for p in parts])


def _theta(value: float) -> float:
    if not (0.0 <= value <= bounds.HALF_PI + 1e-12):
        raise UsageError(f"theta must lie in [0, pi/2], got {value}")
    return min(value, bounds.HALF_PI)


def _emit(args, header, rows, payload=None) -> None:
    if args.format == "json":
        text = json_text(payload if payload is not None else [dict(zip(header, r)) for r in rows])
    else:
        text = csv_text(header, rows)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    text = json_text(obj)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def cmd_compat(args) -> int:
    c = as_symmetric_direction(load_povm(args.povm_c))
    d = as_symmetric_direction(load_povm(args.povm_d))
    ok = compatible(c, d)
    verdict = {
        "compatible": ok,
        "compat_sum": compat_sum(c, d),
        "boundary_residual": compat_boundary_residual(c, d),
        "joint": None,
    }
    if ok:
        J = joint_observable(c, d)
        verdict["joint"] = {f"{k},{l}": operator_to_json(e) for (k, l), e in J.effects.items()}
    _emit_json(args, verdict)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_error(args) -> int:
    target, approx = load_povm(args.target), load_povm(args.approx)
    out = {"measure": args.measure}
    if args.measure == "metric":
        out["value"] = metric_error_general(as_discrete(target), as_discrete(approx))
    else:
        if args.state is None:
            raise UsageError(f"--state is required for the {args.measure} measure")
        state = DensityOperator(args.state)
        if args.measure == "noise":
            out["value"] = noise_general(target, approx, state)
        else:
            a = as_symmetric_direction(target)
            if not isinstance(approx, DichotomicPovm):
                raise UsageError("ebar needs a dichotomic approximator ({gamma, c} form)")
            out["value"] = local_uniform_error(a, approx, state)
        out["state"] = state.r.tolist()
    _emit_json(args, out)
    return EXIT_OK


def cmd_bound(args) -> int:
    theta = _theta(args.theta)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if args.measure == "metric":
        header = ("theta", "phi", "M2", "d_a", "d_b", "u_c", "u_d")
        rows = [
            (theta, p.phi, p.M2, p.d_a, p.d_b, p.u_c, p.u_d)
            for p in bounds.yu_oh_curve(theta, args.grid)
        ]
    else:
        header = ("theta", "phi", "eps_a", "eps_b", "lhs", "rhs")
        rows = []
        for phi in np.linspace(0.0, theta, args.grid):
            ea, eb = bounds.branciard_sharp_errors(theta, phi)
            rows.append((theta, phi, ea, eb, bounds.branciard_lhs(ea, eb, theta), math.sin(theta) ** 2))
    _emit(args, header, rows)
    return EXIT_OK


def cmd_region(args) -> int:
    theta = _theta(args.theta)
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    cfg = optimize.OptimizerConfig(seed=args.seed)
    e_a, e_b = optimize.sample_errors(args.measure, theta, args.samples, cfg)
    margin = optimize.region_margin(args.measure, theta, e_a, e_b)
    header = ("seed", "theta", "measure", "e_a", "e_b")
    rows = [(args.seed, theta, args.measure, x, y) for x, y in zip(e_a.tolist(), e_b.tolist())]
    _emit(args, header, rows)
    print(f"min boundary margin: {float(margin.min()):.6g} over {args.samples} samples",
          file=sys.stderr)
    return EXIT_OK


def cmd_optimize(args) -> int:
    theta = _theta(args.theta)
    a, b = optimize.targets(theta)
    cfg = optimize.OptimizerConfig(max_iter=args.max_iter, conv_tol=args.tol, seed=args.seed)
    if args.c0 is not None:
        c0 = args.c0
    else:
        rng = np.random.default_rng(args.seed)
        c0 = rng.normal(size=3)
        c0 *= rng.uniform() ** (1 / 3) / np.linalg.norm(c0)
    try:
        trace = optimize.alternate_minimize(args.measure, a, b, c0, cfg)
        code = EXIT_OK
    except optimize.ConvergenceError as exc:
        trace, code = exc.trace, EXIT_FAIL
        print(f"no convergence after {trace.iterations} iterations", file=sys.stderr)
    header = ("iteration", "c_x", "c_y", "c_z", "d_x", "d_y", "d_z", "e_a", "e_b")
    rows = []
    for i, (c, d) in enumerate(trace.pairs):
        e_a, e_b = optimize.pair_errors(args.measure, a, b, c, d)
        rows.append((i, *c, *d, e_a, e_b))
    c, d = trace.limit
    payload = {
        "measure": args.measure,
        "theta": theta,
        "c0": np.asarray(c0).tolist(),
        "converged": trace.converged,
        "iterations": trace.iterations,
        "c": c.tolist(),
        "d": d.tolist(),
        "errors": list(optimize.pair_errors(args.measure, a, b, c, d)),
    }
    _emit(args, header, rows, payload)
    return code


def cmd_reproduce(args) -> int:
    if args.figure is not None:
        fig = FIGURES[args.figure](n=args.grid) if args.grid else FIGURES[args.figure]()
        _emit(args, fig.header, fig.rows, {"rows": fig.records(), "checks": fig.checks.to_dict()})
        for check in fig.checks.assertions:
            status = "PASS" if check.passed else "FAIL"
            print(f"{status} {check.label}: {check.actual:.6g}", file=sys.stderr)
        return EXIT_OK if fig.passed else EXIT_FAIL
    report = EXAMPLES[args.example]()
    _emit_json(args, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write primary output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = _Parser(prog="measunc", description="Qubit measurement error tradeoffs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    measures = [m.value for m in Measure]

    s = sub.add_parser("compat", parents=[common], help="joint measurability of two observables")
    s.add_argument("povm_c", help="POVM as inline JSON or a file path")
    s.add_argument("povm_d")
    s.set_defaults(func=cmd_compat)

    s = sub.add_parser("error", parents=[common], help="error of an approximator for a target")
    s.add_argument("--measure", choices=("metric", "noise", "ebar"), default="metric")
    s.add_argument("--target", required=True)
    s.add_argument("--approx", required=True)
    s.add_argument("--state", type=vector, help="Bloch vector, e.g. '0,0,1'")
    s.set_defaults(func=cmd_error)

    s = sub.add_parser("bound", parents=[common], help="optimal tradeoff curve")
    s.add_argument("--measure", choices=measures, required=True)
    s.add_argument("--theta", type=real_expr, required=True)
    s.add_argument("--grid", type=int, default=101)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("region", parents=[common], help="Monte Carlo sample of achievable errors")
    s.add_argument("--measure", choices=measures, required=True)
    s.add_argument("--theta", type=real_expr, required=True)
    s.add_argument("--samples", type=int, default=10_000)
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("optimize", parents=[common], help="alternating minimisation trace")
    s.add_argument("--measure", choices=measures, required=True)
    s.add_argument("--theta", type=real_expr, required=True)
    s.add_argument("--c0", type=vector, help="starting approximator; random if omitted")
    s.add_argument("--max-iter", type=int, default=optimize.DEFAULT_CONFIG.max_iter)
    s.add_argument("--tol", type=float, default=optimize.DEFAULT_CONFIG.conv_tol)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("reproduce", parents=[common], help="figure data or worked examples")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--figure", choices=sorted(FIGURES))
    g.add_argument("--example", choices=sorted(EXAMPLES))
    s.add_argument("--grid", type=int, help="grid size for figure data")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaError, InvalidOperatorError, ValueError) as exc:
        print(f"measunc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
