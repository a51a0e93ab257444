"""
Time-of-Arrival Kernel Toolkit

Command-line entry point for the four jobs the toolkit does:
1. Tabulate the kernel factor T_0 + T_1 + ... + T_n over a (u, v) lattice
2. Sample classical, local and phase-space arrival times over (q, p)
3. Assemble the discretized operator (and an expectation value)
4. Run the acceptance suite and write its JSON report

Usage:
    python main.py kernel --potential quartic --nmax 3 --u 0:1:0.1 --v 0:1:0.1
    python main.py wigner --potential harmonic --q -1 --p 1
    python main.py operator --potential free --L 20 --N 400 --psi packet.csv
    python main.py verify --only tke-residual
"""

import argparse
import json
import logging
import math
import os
import sys
from datetime import datetime

import numpy as np
import pandas as pd

import config
import exporter
from errors import ConfigError, NumericalError
from kernel_engine import get_engine
from kernel_engine.kernels import grid_extent
from operator_assembly import Wavefunction, assemble, expectation_complex, hermiticity_defect
from potential import PRESETS, PotentialSeries, load_potential
from series_oracle import build_alpha_orders
from verification import AcceptanceSuite
from wigner import classical_toa, ltoa_series, wigner_of_series

log = logging.getLogger("toa")


class ToaArgumentParser(argparse.ArgumentParser):
    """Reports bad arguments as ConfigError so they reach the JSON error path."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


RANGE_TOL = 1e-12


def banner(title: str):
    """Progress banner on stderr; stdout carries only results."""
    print("\n" + "=" * 60, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * 60, file=sys.stderr)


def parse_range(text: str) -> np.ndarray:
    """'start:stop:step' (endpoints inclusive within 1e-12) or a single number."""
    parts = text.split(":")
    try:
        numbers = [float(x) for x in parts]
    except ValueError:
        raise ConfigError(f"bad range {text!r}; expected start:stop:step") from None
    if len(numbers) == 1:
        return np.array(numbers)
    if len(numbers) != 3:
        raise ConfigError(f"bad range {text!r}; expected start:stop:step")
    start, stop, step = numbers
    if step <= 0:
        raise ConfigError(f"range step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"range {text!r} runs backwards")
    count = int(math.floor((stop - start) / step + RANGE_TOL / step)) + 1
    values = np.round(start + step * np.arange(count), 12)
    if abs(values[-1] - stop) <= RANGE_TOL:
        values[-1] = stop
    return values


def resolve_potential_path(args) -> str:
    """Preset name, path, or the name of a file under potentials/."""
    source = args.potential
    if source in PRESETS or os.path.exists(source):
        return source
    bundled = os.path.join(config.POTENTIALS_DIR, source)
    return bundled if os.path.exists(bundled) else bundled + ".json"


def resolve_potential(args) -> PotentialSeries:
    """The requested potential re-expanded about the arrival point."""
    V = load_potential(resolve_potential_path(args), mass=args.mass, hbar=args.hbar)
    return V.shift(args.arrival)


def check_common(args):
    if args.nmax < 0:
        raise ConfigError("--nmax must be >= 0")
    if args.grid < 2:
        raise ConfigError("--grid must be >= 2")
    if args.tol <= 0:
        raise ConfigError("--tol must be positive")


def emit(df: pd.DataFrame, args):
    """Write a result frame as CSV or JSON records, to --out or stdout."""
    if args.format == "json":
        text = df.to_json(orient="records", double_precision=15) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    elif args.out:
        exporter.write_frame(df, args.out)
    else:
        sys.stdout.write(exporter.write_frame(df))
    if args.out:
        print(f"Saved {len(df)} rows to {args.out}", file=sys.stderr)


def cmd_kernel(args) -> int:
    """(u, v, T_0, ..., T_nmax, sum) rows over the requested lattice."""
    check_common(args)
    V = resolve_potential(args)
    u = parse_range(args.u)
    v = parse_range(args.v)
    banner(f"KERNEL: n_max={args.nmax} on {len(u)} x {len(v)} points")

    uu, vv = np.meshgrid(u, v, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    engine = get_engine(
        V,
        grid_extent(float(np.max(np.abs(uu)))),
        grid_extent(float(np.max(np.abs(vv)))),
        args.grid,
        args.tol,
        signed=bool(np.any(uu < 0)),
    )
    terms = engine.kernel_terms(args.nmax, uu, vv)

    df = pd.DataFrame({"u": uu, "v": vv})
    for n, values in enumerate(terms):
        df[f"T{n}"] = values
    df["sum"] = np.sum(terms, axis=0)
    emit(df, args)
    return 0


def _safe(fn, *a, **kw) -> float:
    """Value of fn or NaN when the point is outside its domain."""
    try:
        return fn(*a, **kw)
    except NumericalError as e:
        log.info("%s: %s", type(e).__name__, e)
        return float("nan")


def _exponent(a: float, b: float, ratio: float) -> float:
    if a == 0 or b == 0 or not (math.isfinite(a) and math.isfinite(b)):
        return float("nan")
    return math.log(a / b) / math.log(ratio)


def cmd_wigner(args) -> int:
    """Classical, local and phase-space arrival times on a (q, p) lattice."""
    check_common(args)
    if args.kmax < 0:
        raise ConfigError("--kmax must be >= 0")
    original = load_potential(resolve_potential_path(args), mass=args.mass, hbar=args.hbar)
    V = original.shift(args.arrival)
    q = parse_range(args.q)
    p = parse_range(args.p)
    banner(f"WIGNER: n_max={args.nmax} on {len(q)} x {len(p)} points")

    table = build_alpha_orders(V, args.series_order, 2 * args.nmax + 10)
    series = [wigner_of_series(table, V.mass, V.hbar, order=s) for s in range(args.nmax + 1)]
    half = V.hbar / 2.0

    rows = []
    for qi in q:
        for pi in p:
            row = {"q": qi, "p": pi}
            row["tau_classical"] = _safe(classical_toa, original, qi, pi, args.tol, arrival=args.arrival)
            row[f"tau_ltoa_{args.kmax}"] = _safe(ltoa_series, V, qi - args.arrival, pi, args.kmax, args.tol)
            for n, s in enumerate(series):
                row[f"T{n}"] = _safe(s.evaluate, qi - args.arrival, pi)
            for n in range(1, args.nmax + 1):
                full = _safe(series[n].evaluate, qi - args.arrival, pi)
                halved = _safe(series[n].evaluate, qi - args.arrival, pi, hbar=half)
                row[f"scaling_T{n}"] = _exponent(full, halved, 2.0)
            rows.append(row)
    emit(pd.DataFrame(rows), args)
    return 0


def cmd_operator(args) -> int:
    """Operator matrix (i, j, re, im) and, with --psi, the expectation record."""
    check_common(args)
    V = resolve_potential(args)
    banner(f"OPERATOR: {args.N} x {args.N} on [-{args.L:g}, {args.L:g}], n_max={args.nmax}")
    K = assemble(V, args.nmax, args.L, args.N, args.grid, args.tol)
    defect = hermiticity_defect(K)

    record = None
    if args.psi:
        psi = Wavefunction.from_csv(args.psi, K.grid)
        value = expectation_complex(K, psi)
        record = {
            "value": value.real,
            "imag_residue": abs(value.imag),
            "hermiticity_defect": defect,
        }
        print(f"<T> = {value.real:.10g}  (imaginary residue {abs(value.imag):.3e})", file=sys.stderr)

    if args.format == "json":
        doc = {
            "potential": V.to_dict(),
            "n_max": args.nmax,
            "L": args.L,
            "N": args.N,
            "hermiticity_defect": defect,
            "re": K.entries.real.tolist(),
            "im": K.entries.imag.tolist(),
            "expectation": record,
        }
        text = json.dumps(doc) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
        return 0

    emit(exporter.matrix_frame(K), args)
    if record is not None and args.out:
        sidecar = os.path.splitext(args.out)[0] + ".expectation.json"
        with open(sidecar, "w", encoding="utf-8") as f:
            json.dump(record, f, indent=2)
        print(f"Expectation record saved to {sidecar}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    """Run the acceptance suite; exit 1 when any check fails."""
    suite = AcceptanceSuite(seed=args.seed)
    try:
        suite.run(args.only)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from None

    text = suite.export_json(args.out)
    if args.out:
        print(f"\nReport saved to: {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text + "\n")

    failed = [r.name for r in suite.results if not r.passed]
    banner("ALL CHECKS PASSED" if not failed else f"FAILED: {', '.join(failed)}")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    common = ToaArgumentParser(add_help=False)
    common.add_argument(
        "--potential",
        default="quartic",
        help="Preset (free, harmonic, quartic) or JSON file {\"coeffs\": [...]} (default: quartic)"
    )
    common.add_argument("--nmax", type=int, default=3, help="Highest correction order (default: 3)")
    common.add_argument(
        "--grid",
        type=int,
        default=config.GRID_NODES,
        help=f"Kernel grid nodes per axis (default: {config.GRID_NODES})"
    )
    common.add_argument(
        "--tol",
        type=float,
        default=config.GRID_TOL,
        help=f"Quadrature tolerance (default: {config.GRID_TOL:g})"
    )
    common.add_argument("--hbar", type=float, default=None, help="Override hbar of the potential")
    common.add_argument("--mass", type=float, default=None, help="Override the mass of the potential")
    common.add_argument("--arrival", type=float, default=0.0, help="Arrival point x (default: 0)")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")

    parser = ToaArgumentParser(description="Time-of-arrival kernel toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    kernel = commands.add_parser("kernel", parents=[common], help="Tabulate T_0..T_nmax")
    kernel.add_argument("--u", default="0:1:0.1", help="u range start:stop:step (default: 0:1:0.1)")
    kernel.add_argument("--v", default="0:1:0.1", help="v range start:stop:step (default: 0:1:0.1)")
    kernel.set_defaults(handler=cmd_kernel)

    wigner = commands.add_parser("wigner", parents=[common], help="Arrival times over (q, p)")
    wigner.add_argument("--q", default="-1", help="q range (default: -1)")
    wigner.add_argument("--p", default="1", help="p range (default: 1)")
    wigner.add_argument("--kmax", type=int, default=4, help="Local time of arrival order (default: 4)")
    wigner.add_argument(
        "--series-order",
        type=int,
        default=48,
        help="Power of u kept in the phase-space series (default: 48)"
    )
    wigner.set_defaults(handler=cmd_wigner)

    operator = commands.add_parser("operator", parents=[common], help="Discretized operator matrix")
    operator.add_argument("--L", type=float, default=1.0, help="Half-width of the q grid (default: 1)")
    operator.add_argument("--N", type=int, default=60, help="Number of q points (default: 60)")
    operator.add_argument("--psi", default=None, help="Wavefunction CSV with q, re, im columns")
    operator.set_defaults(handler=cmd_operator)

    verify = commands.add_parser("verify", help="Run the acceptance suite")
    verify.add_argument("--only", action="append", default=None, help="Run just this check (repeatable)")
    verify.add_argument("--out", default=None, help="Report file (default: stdout)")
    verify.add_argument(
        "--seed",
        type=int,
        default=config.VERIFY_SEED,
        help=f"Seed of the randomized checks (default: {config.VERIFY_SEED})"
    )
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: list = None) -> int:
    """Main entry point; returns the process exit code."""
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    print("\n" + "#" * 60, file=sys.stderr)
    print("# TIME-OF-ARRIVAL KERNEL TOOLKIT", file=sys.stderr)
    print(f"# Run Date: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", file=sys.stderr)
    print("#" * 60, file=sys.stderr)

    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except ConfigError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 2
    except NumericalError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
