"""
Command-line front end.

    python -m ui.cli eval-kernel --kernel K1 --M H/2 --r 0.2 --t 1
    python -m ui.cli tail-scan --config data/config/defaults.cfg --m 0.25iH
    python -m ui.cli verify --suite all --output data/output/verify.json

Data goes to stdout or the output file; status lines go to stderr.
Exit codes: 0 ok, 2 bad parameters, 3 domain or numerical failure,
4 unmatched tail, 5 failed invariants.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from backend.errors import DeSitterError, InvariantFailure, ParameterError
from backend.huygens import Verdict, tail_scan
from backend.invariants import SUITES, run_suite
from backend.kernels import (CosmologyParams, dirac_combo_minus, dirac_combo_plus, kernel_E,
                             kernel_K0, kernel_K1, lattice_mass)
from backend.reports import status, validate_report, write_report
from ui.run_config import FORMATS, RunConfig, parse_mass

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_DOMAIN = 3
EXIT_UNMATCHED = 4
EXIT_INVARIANT = 5

KERNELS = ("E", "K0", "K1", "comboPlus", "comboMinus")


def format_value(z: complex, fmt: str) -> str:
    z = complex(z)
    if fmt == "json":
        return json.dumps({"re": z.real, "im": z.imag})
    return f"{z.real:.17g},{z.imag:.17g}"


def cmd_eval_kernel(args) -> int:
    H = args.H
    if args.ell is not None:
        m = lattice_mass(args.ell, H)
    elif args.m is not None:
        m = parse_mass(args.m, H)
    else:
        m = 0j
    cp = CosmologyParams(H, m)
    M = parse_mass(args.M, H) if args.M is not None else cp.M_plus

    if args.kernel == "E":
        value = kernel_E(args.r, args.t, args.t0, M, cp)
    elif args.kernel == "K0":
        value = kernel_K0(args.r, args.t, M, cp)
    elif args.kernel == "K1":
        value = kernel_K1(args.r, args.t, M, cp)
    elif args.kernel == "comboPlus":
        value = dirac_combo_plus(args.r, args.t, cp)
    else:
        value = dirac_combo_minus(args.r, args.t, cp)
    print(format_value(value, args.format))
    return EXIT_OK


def _scan_overrides(args) -> dict:
    return {
        "H": args.H, "m": args.m, "ell": args.ell, "eps": args.eps, "amp": args.amp,
        "t_min": args.t_min, "t_max": args.t_max, "t_steps": args.t_steps, "split": args.split,
        "huygens_tol": args.huygens_tol, "rate_tol": args.rate_tol, "output": args.output,
        "format": args.format,
    }


def cmd_tail_scan(config: RunConfig) -> int:
    cp = config.cosmology
    status(f"🏗️ Tail scan: H={cp.H:g}, m={cp.m}, split={config.split}, "
           f"t in [{config.t_min:g}, {config.t_max:g}] x {config.t_steps}")
    report = tail_scan(config.tail_split, config.bump, cp, config.t_grid,
                       huygens_tol=config.huygens_tol, rate_tol=config.rate_tol,
                       max_workers=config.threads)
    path = write_report(report, config.output, config.format, config.to_dict())
    validate_report(path)

    status(f"📊 Mass class {report.mass_class}, max |tail| = {report.max_tail:.3e}")
    if report.verdict is Verdict.NON_HUYGENSIAN_UNMATCHED:
        status(f"⚠️  Verdict {report.verdict.value}: tail does not follow the leading term "
               f"(final |ratio-1| = {report.deviations[-1]:.3e})")
        return EXIT_UNMATCHED
    status(f"✅ Verdict {report.verdict.value}")
    return EXIT_OK


def cmd_verify(suite: str, output: Optional[str] = None) -> int:
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        status(f"🔍 Running suite {name}...")
        results.extend(run_suite(name))

    width = max(len(f"{r.suite}/{r.name}") for r in results)
    for r in results:
        mark = "✅" if r.passed else "❌"
        status(f"{mark} {f'{r.suite}/{r.name}':<{width}}  {r.detail}")

    failures = [r for r in results if not r.passed]
    summary = {
        "suites": names,
        "passed": not failures,
        "checks": [r.to_dict() for r in results],
    }
    text = json.dumps(summary, ensure_ascii=False, indent=2)
    if output:
        os.makedirs(Path(output).parent, exist_ok=True)
        with open(output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text + "\n")
        status(f"📁 Wrote {output}")
    else:
        print(text)

    if failures:
        raise InvariantFailure(failures)
    status(f"🎉 All {len(results)} checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dsh", description="de Sitter Dirac/Klein-Gordon kernels and Huygens tail checks.")
    ap.add_argument("--verbose", action="store_true", help="Debug logging from the backend.")
    sub = ap.add_subparsers(dest="command", required=True)

    ek = sub.add_parser("eval-kernel", help="Evaluate one kernel at a point.")
    ek.add_argument("--kernel", choices=KERNELS, required=True)
    ek.add_argument("--r", type=float, default=0.0, help="Comoving radius (default 0).")
    ek.add_argument("--t", type=float, required=True, help="Time.")
    ek.add_argument("--t0", type=float, default=0.0, help="Source time for E (default 0).")
    ek.add_argument("--M", type=str, default=None,
                    help="Kernel mass, e.g. 0.3, 1+0.5i, H/2, 3H/2 (default H/2 + i m).")
    ek.add_argument("--m", type=str, default=None, help="Physical mass, e.g. 0.25i or 0.25iH (default 0).")
    ek.add_argument("--ell", type=int, default=None, help="Lattice mass m = i(H/2)(1+ell).")
    ek.add_argument("--H", type=float, default=1.0, help="Hubble constant (default 1).")
    ek.add_argument("--format", choices=FORMATS, default="csv")

    ts = sub.add_parser("tail-scan", help="Scan the origin tail over time and write a report.")
    ts.add_argument("--config", type=str, default=None,
                    help="key=value file (see data/config/defaults.cfg); flags override it.")
    ts.add_argument("--H", type=float, default=None, help="Hubble constant (default 1).")
    ts.add_argument("--m", type=str, default=None, help="Mass (default 0.25i).")
    ts.add_argument("--ell", type=int, default=None, help="Lattice mass index; overrides --m.")
    ts.add_argument("--eps", type=float, default=None, help="Bump radius (default 0.1).")
    ts.add_argument("--amp", type=float, default=None, help="Bump amplitude (default 1).")
    ts.add_argument("--t-min", dest="t_min", type=float, default=None, help="Default 3.")
    ts.add_argument("--t-max", dest="t_max", type=float, default=None, help="Default 12.")
    ts.add_argument("--t-steps", dest="t_steps", type=int, default=None, help="Default 20.")
    ts.add_argument("--split", choices=("first", "second"), default=None, help="Default first.")
    ts.add_argument("--huygens-tol", dest="huygens_tol", type=float, default=None, help="Default 1e-8.")
    ts.add_argument("--rate-tol", dest="rate_tol", type=float, default=None, help="Default 0.05.")
    ts.add_argument("--output", type=str, default=None, help="Default data/output/tail_scan.csv.")
    ts.add_argument("--format", choices=FORMATS, default=None, help="Default csv.")

    vf = sub.add_parser("verify", help="Run invariant suites.")
    vf.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    vf.add_argument("--output", type=str, default=None, help="Write the JSON summary here.")
    return ap


def _dispatch(args) -> int:
    if args.command == "eval-kernel":
        return cmd_eval_kernel(args)
    if args.command == "tail-scan":
        return cmd_tail_scan(RunConfig.load(args.config, _scan_overrides(args)))
    return cmd_verify(args.suite, args.output)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_PARAMETER if e.code else EXIT_OK

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except InvariantFailure as e:
        status(f"❌ {e}")
        return EXIT_INVARIANT
    except ParameterError as e:
        status(f"❌ Invalid parameters: {e}")
        return EXIT_PARAMETER
    except DeSitterError as e:
        status(f"❌ {type(e).__name__}: {e}")
        return EXIT_DOMAIN
    except OSError as e:
        status(f"❌ Cannot read or write a file: {e}")
        return EXIT_PARAMETER


if __name__ == "__main__":
    sys.exit(main())
