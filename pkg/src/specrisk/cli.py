"""Command-line surface.

Subcommands: eval, curve, lorenz, gini, dominates, combine, optimize,
selftest. Inputs are CSV samples (one value column, or value,weight) and JSON
specs; outputs are deterministic — byte-identical for identical inputs and
seeds. Exit codes: 0 success, 1 invalid input, 2 numerical failure (non-finite
result), 3 selftest criteria failed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance
from .combination import Combiner, combine, combine_to_distortion
from .distortion import Distortion
from .empirical_core import load_csv
from .errors import InvalidInputError, NumericalError, SpecRiskError
from .evaluation import (
    cvar_breakpoint_grid,
    cvar_curve,
    gini,
    lorenz_breakpoint_grid,
    lorenz_curve,
    second_order_dominates,
)
from .optimizer import run_experiment
from .risk_measures import RiskSpec, evaluate


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from exc


def _write_or_print(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_eval(args) -> int:
    spec = RiskSpec.from_json(_read_json(args.risk))
    sample = load_csv(args.data)
    value = evaluate(spec, sample)
    if not np.isfinite(value):
        raise NumericalError(f"risk evaluated to {value}")
    print(_dump({"spec": spec.to_json(), "value": value}))
    return 0


def _curve_for(kind: str, sample, max_alpha):
    if kind == "cvar":
        return cvar_curve(sample, cvar_breakpoint_grid(sample, max_alpha))
    return lorenz_curve(sample, lorenz_breakpoint_grid(sample))


def _cmd_curve(args) -> int:
    sample = load_csv(args.data)
    curve = _curve_for(args.kind, sample, args.max_alpha)
    if not np.all(np.isfinite(curve.values)):
        raise NumericalError("curve contains non-finite values")
    _write_or_print(curve.to_csv_text(), args.out)
    if args.json is not None:
        _write_or_print(_dump(curve.to_json_obj()) + "\n", args.json)
    return 0


def _cmd_lorenz(args) -> int:
    sample = load_csv(args.data)
    curve = lorenz_curve(sample, lorenz_breakpoint_grid(sample))
    _write_or_print(curve.to_csv_text(), args.out)
    if args.json is not None:
        _write_or_print(_dump(curve.to_json_obj()) + "\n", args.json)
    return 0


def _cmd_gini(args) -> int:
    value = gini(load_csv(args.data))
    if not np.isfinite(value):
        raise NumericalError(f"gini evaluated to {value}")
    print(_dump(value))
    return 0


def _cmd_dominates(args) -> int:
    a = load_csv(args.a)
    b = load_csv(args.b)
    print(_dump(second_order_dominates(a, b)))
    return 0


def _cmd_combine(args) -> int:
    phi0 = Distortion.from_json(_read_json(args.phi0))
    phi1 = Distortion.from_json(_read_json(args.phi1))
    psi = Combiner.from_json(_read_json(args.psi))
    f = combine(phi0, phi1, psi)
    if args.concavify:
        payload = combine_to_distortion(f).to_json()
    else:
        grid = np.linspace(0.0, 1.0, 1025)
        payload = {"kind": "fundamental", "grid": grid.tolist(), "values": f(grid).tolist()}
    _write_or_print(_dump(payload) + "\n", args.out)
    return 0


def _cmd_optimize(args) -> int:
    config = _read_json(args.config)
    paths = run_experiment(config, args.out_dir)
    print(_dump(paths))
    return 0


def _cmd_selftest(args) -> int:
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} criteria failed: {failed}")
        return 3
    print(f"all {len(results)} criteria passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specrisk",
        description="Spectral risk measures, extremal norms, and risk-averse training on empirical samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a risk spec on a CSV sample")
    p.add_argument("--risk", required=True, help="JSON risk spec file")
    p.add_argument("--data", required=True, help="CSV sample (value[,weight] rows)")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("curve", help="write a tail-value or Lorenz curve as CSV")
    p.add_argument("--kind", required=True, choices=("cvar", "lorenz"))
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.add_argument("--json", default=None, help="also write the curve as JSON here")
    p.add_argument("--max-alpha", type=float, default=None, help="truncate the tail-value grid at this level")
    p.set_defaults(fn=_cmd_curve)

    p = sub.add_parser("lorenz", help="write the Lorenz curve as CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=_cmd_lorenz)

    p = sub.add_parser("gini", help="print the Gini coefficient")
    p.add_argument("--data", required=True)
    p.set_defaults(fn=_cmd_gini)

    p = sub.add_parser("dominates", help="print whether sample A is dominated-or-equal at every tail level")
    p.add_argument("--a", required=True, help="CSV sample A")
    p.add_argument("--b", required=True, help="CSV sample B")
    p.set_defaults(fn=_cmd_dominates)

    p = sub.add_parser("combine", help="merge two distortions through a combiner")
    p.add_argument("--phi0", required=True, help="JSON distortion file")
    p.add_argument("--phi1", required=True, help="JSON distortion file")
    p.add_argument("--psi", required=True, help="JSON combiner file")
    p.add_argument("--concavify", action="store_true", help="emit the least concave majorant as a distortion")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_combine)

    p = sub.add_parser("optimize", help="run a training experiment from a JSON config")
    p.add_argument("--config", required=True, help="JSON config with objective, risk, steps, lr, seed, data")
    p.add_argument("--out-dir", default=".", help="directory for the output files")
    p.set_defaults(fn=_cmd_optimize)

    p = sub.add_parser("selftest", help="run the acceptance criteria and print pass/fail lines")
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; fold that into the invalid-input code
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpecRiskError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
