"""Command-line front end.

Exit codes: 0 ok, 1 selftest failure, 2 usage, 3 pole, 4 numerical failure.
Complex flags are written ``re,im`` (``--z 0.25,0``); a bare real is
accepted too.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from .analysis import find_completion_zeros, voronoi_comparison
from .elliptic import SigmaEvaluator
from .errors import ConvergenceFailure, IncompleteCensus, ModSigmaError, PoleAt
from .lattice import Lattice, LatticeVector, eta_modified, eta_original
from .lll import (
    WavefunctionSpec,
    boundary_residual,
    log_psi,
    spec_from_zeros,
    spec_with_k,
    zero_count,
)
from .selftest import format_table, run_selftest

EXIT_OK, EXIT_SELFTEST, EXIT_USAGE, EXIT_POLE, EXIT_NUMERIC = 0, 1, 2, 3, 4

FUNCTIONS = ("sigma", "sigma_orig", "zeta", "wp", "sigma1", "sigma2", "sigma3", "completion", "zfun")
_COMPLEX_FLAGS = {"--omega1", "--omega2", "--z", "--k"}
_NUMBER = re.compile(r"^-[0-9.]")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """JSON with every float printed at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    x = float(obj)
    return fmt(x) if math.isfinite(x) else "null"


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from exc


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(p) for p in text.split(";") if p.strip()]


def _glue_negative_values(argv):
    # "--z -0.5,0" would otherwise be read as an unknown flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COMPLEX_FLAGS and i + 1 < len(argv) and _NUMBER.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _add_lattice(p):
    # required unless --lattice is given; checked in _lattice
    p.add_argument("--omega1", type=parse_complex, help="half-period omega1 as re,im")
    p.add_argument("--omega2", type=parse_complex, help="half-period omega2 as re,im")
    p.add_argument("--lattice", help="JSON file {omega1: [re,im], omega2: [re,im]} (overrides flags)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modsigma", description="Modified Weierstrass functions on complex lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one function at one point")
    _add_lattice(p)
    p.add_argument("--fn", choices=FUNCTIONS, required=True)
    p.add_argument("--z", type=parse_complex, required=True)
    p.add_argument("--log", action="store_true", help="print {logAbs, arg} instead of {re, im}")

    p = sub.add_parser("invariants", help="area, tau, gamma_2k, eta constants")
    _add_lattice(p)

    p = sub.add_parser("grid", help="CSV samples over one primitive cell")
    _add_lattice(p)
    p.add_argument("--fn", choices=FUNCTIONS, required=True)
    p.add_argument("--n", type=int, default=64, help="samples per cell edge (<= 4096)")
    p.add_argument("--cells", type=int, default=1, help="cells per direction")
    p.add_argument("--log", action="store_true")

    p = sub.add_parser("zeros", help="zero census of the periodic completion")
    _add_lattice(p)
    p.add_argument("--grid-n", type=int, default=16)

    p = sub.add_parser("wavefunction", help="single-particle LLL state")
    _add_lattice(p)
    p.add_argument("--spec", help="JSON file {lattice, nPhi, zeros, K}")
    p.add_argument("--nphi", type=int)
    p.add_argument("--zeros", type=parse_complex_list, help="'re,im;re,im;...'")
    p.add_argument("--k", type=parse_complex, help="boundary K (default: derived from zeros)")
    p.add_argument("--z", type=parse_complex, default=0.1 + 0.05j)

    p = sub.add_parser("selftest", help="run the identity suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--lattices", type=int, default=100)
    p.add_argument("--perturb-gamma2", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _lattice(args, parser) -> Lattice:
    if getattr(args, "lattice", None):
        with open(args.lattice) as fh:
            return Lattice.from_json(json.load(fh))
    if args.omega1 is None or args.omega2 is None:
        parser.error("--omega1 and --omega2 are required")
    return Lattice(args.omega1, args.omega2)


def evaluate(ev: SigmaEvaluator, fn: str, z, log: bool = False):
    """Value (or complex log) of the named function; arrays accepted."""
    if fn == "sigma":
        return ev.log_sigma_modified(z) if log else ev.sigma_modified(z)
    if fn == "zfun":
        return ev.log_z_quasi(z) if log else ev.z_quasi(z)
    if fn == "sigma_orig":
        val = ev.sigma_original(z)
    elif fn == "zeta":
        val = ev.zeta_modified(z)
    elif fn == "wp":
        val = ev.wp_modified(z)
    elif fn in ("sigma1", "sigma2", "sigma3"):
        val = ev.sigma_symmetric(int(fn[-1]), z)
    elif fn == "completion":
        val = ev.eisenstein_completion(z)
    else:
        raise ValueError(fn)
    if log:
        with np.errstate(divide="ignore"):
            return np.log(val)
    return val


def _split(val: complex, log: bool) -> dict:
    if log:
        arg = math.remainder(val.imag, 2 * math.pi)
        return {"logAbs": val.real, "arg": arg}
    return {"re": val.real, "im": val.imag}


def cmd_eval(args, parser, out):
    ev = SigmaEvaluator(_lattice(args, parser))
    val = complex(evaluate(ev, args.fn, args.z, args.log))
    out.write(dumps(_split(val, args.log)) + "\n")


def cmd_invariants(args, parser, out):
    lat = _lattice(args, parser)
    report = {
        "area": lat.area,
        "tau": lat.tau,
        "orientation": lat.orientation,
        "gamma2": lat.gamma2,
        "gamma4": lat.gamma4,
        "gamma6": lat.gamma6,
        "eta": [eta_original(lat, i) for i in (1, 2, 3)],
        "etaModified": [eta_modified(lat, i) for i in (1, 2, 3)],
        "legendreCheck": eta_modified(lat, 1) * lat.omega2 - eta_modified(lat, 2) * lat.omega1,
    }
    out.write(dumps(report) + "\n")


def grid_points(lat: Lattice, n: int, cells: int = 1):
    """Row-major sample points (s + 0.5)/n cell fractions, ``cells`` cells per direction."""
    k = (np.arange(n * cells) + 0.5) / n
    tt, ss = np.meshgrid(k, k, indexing="ij")
    return 2 * ss * lat.omega1 + 2 * tt * lat.omega2


def cmd_grid(args, parser, out):
    if not 1 <= args.n <= 4096:
        parser.error("--n must be in [1, 4096]")
    if args.cells < 1:
        parser.error("--cells must be >= 1")
    lat = _lattice(args, parser)
    ev = SigmaEvaluator(lat)
    pts = grid_points(lat, args.n, args.cells).ravel()
    vals = np.asarray(evaluate(ev, args.fn, pts, args.log), dtype=complex)
    out.write("x,y,logAbs,arg\n" if args.log else "x,y,re,im\n")
    for z, v in zip(pts, vals):
        if args.log:
            b = math.remainder(v.imag, 2 * math.pi) if math.isfinite(v.imag) else v.imag
            a = v.real
        else:
            a, b = v.real, v.imag
        out.write(f"{fmt(z.real)},{fmt(z.imag)},{fmt(a)},{fmt(b)}\n")


def cmd_zeros(args, parser, out):
    ev = SigmaEvaluator(_lattice(args, parser))
    census = find_completion_zeros(ev, args.grid_n)
    report = census.to_json()
    report["voronoiDiscrepancy"] = voronoi_comparison(ev, census).max_discrepancy
    out.write(dumps(report) + "\n")


def cmd_wavefunction(args, parser, out):
    if args.spec:
        with open(args.spec) as fh:
            spec = WavefunctionSpec.from_json(json.load(fh))
    else:
        lat = _lattice(args, parser)
        if args.nphi is None or args.zeros is None:
            parser.error("--nphi and --zeros are required without --spec")
        if args.k is None:
            spec = spec_from_zeros(lat, args.nphi, args.zeros)
        else:
            spec = spec_with_k(lat, args.nphi, args.zeros, args.k)
    lp = complex(log_psi(spec, args.z))
    report = {
        "spec": spec.to_json(),
        "ell": spec.ell,
        "z": args.z,
        "logPsi": _split(lp, True),
        "boundaryResidual": [boundary_residual(spec, args.z, v) for v in (LatticeVector(1, 0), LatticeVector(0, 1))],
        "zeroCount": zero_count(spec),
    }
    out.write(dumps(report) + "\n")


def cmd_selftest(args, parser, out):
    ok, results, _ = run_selftest(args.lattices, args.seed, args.perturb_gamma2)
    out.write(format_table(results) + "\n")
    out.write(("selftest PASSED" if ok else "selftest FAILED") + "\n")
    return EXIT_OK if ok else EXIT_SELFTEST


COMMANDS = {
    "eval": cmd_eval,
    "invariants": cmd_invariants,
    "grid": cmd_grid,
    "zeros": cmd_zeros,
    "wavefunction": cmd_wavefunction,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = COMMANDS[args.command](args, parser, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except PoleAt as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (IncompleteCensus, ConvergenceFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ModSigmaError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
