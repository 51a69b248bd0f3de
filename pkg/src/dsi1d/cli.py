"""Command-line front end: phase grids, spectra, S-matrix traces, verification.

Every output starts with a run manifest. CSV files carry it as a leading
``# {json}`` line; JSON files carry it under ``"manifest"``. The digest
covers the data only, so identical invocations have identical digests.

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 numerical-range or convergence failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import angular as ang
from . import radial
from .exceptions import ConvergenceError, NumericalRangeError, ValidationError
from .radial import UNIT_CONVENTION
from .verify import SUITES, run_suites

EXIT_OK, EXIT_VALIDATION, EXIT_VERIFY, EXIT_RANGE = 0, 1, 2, 3

PHASE_COLUMNS = ["g1", "g2", "region", "lambda0", "lambda1", "nu0", "nu1"]
ANGULAR_COLUMNS = ["index", "lambda", "nu", "coeff_a_re", "coeff_a_im", "coeff_b_re", "coeff_b_im", "subcritical"]
SPECTRUM_COLUMNS = ["ell", "kappa", "energy", "norm_sq", "ratio_next", "error"]
SMATRIX_COLUMNS = ["k", "re_s", "im_s", "arg_s", "abs_s"]
WAVEFUNCTION_COLUMNS = ["r", "re_R", "im_R"]


def _version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        from . import __version__

        return __version__


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _parse_coupling(text):
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "neumann"):
        return math.inf
    if t == "dirichlet":
        return 0.0
    return float(text)


# ---------------------------------------------------------------- formatting


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _manifest(command, params, digest):
    return {
        "command": command,
        "params": params,
        "version": _version(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "units": UNIT_CONVENTION,
        "output_sha256": digest,
    }


def render(command, params, columns, rows, fmt):
    """Serialize a table with its manifest."""
    if fmt == "csv":
        body = io.StringIO()
        body.write(",".join(columns) + "\n")
        for row in rows:
            body.write(",".join(_fmt(row.get(c)) for c in columns) + "\n")
        text = body.getvalue()
        digest = hashlib.sha256(text.encode()).hexdigest()
        head = json.dumps(_manifest(command, params, digest), sort_keys=True)
        return f"# {head}\n{text}"
    data = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(payload.encode()).hexdigest()
    doc = {"manifest": _manifest(command, params, digest), "columns": columns, "rows": data}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- commands


def _phase_row(pair):
    g1, g2 = pair
    c = ang.CouplingPair(g1, g2)
    verdict = ang.classify_phase(c)
    neg = verdict.channels
    row = {"g1": g1, "g2": g2, "region": verdict.region.value}
    for i in range(2):
        ch = neg[i] if i < len(neg) else None
        row[f"lambda{i}"] = ch.lam if ch else None
        row[f"nu{i}"] = ch.nu if ch else None
    return row


def _map(fn, items, threads):
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))
    return [fn(x) for x in items]


def cmd_phases(args):
    if args.resolution < 2:
        raise ValidationError("resolution must be >= 2")
    for lo, hi in (args.g1_range, args.g2_range):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"invalid coupling range [{lo}, {hi}]")
    g1s = np.linspace(*args.g1_range, args.resolution)
    g2s = np.linspace(*args.g2_range, args.resolution)
    pairs = [(float(a), float(b)) for a in g1s for b in g2s]
    rows = _map(_phase_row, pairs, args.threads)
    params = {"g1_range": list(args.g1_range), "g2_range": list(args.g2_range), "resolution": args.resolution}
    return PHASE_COLUMNS, rows, params


def cmd_angular(args):
    c = ang.CouplingPair(args.g1, args.g2)
    if args.count < 1:
        raise ValidationError("count must be >= 1")
    rows = [
        {
            "index": ch.channel_index,
            "lambda": ch.lam,
            "nu": ch.nu,
            "coeff_a_re": ch.coeff_a.real,
            "coeff_a_im": ch.coeff_a.imag,
            "coeff_b_re": ch.coeff_b.real,
            "coeff_b_im": ch.coeff_b.imag,
            "subcritical": ch.subcritical,
        }
        for ch in ang.angular_eigenvalues(c, args.count)
    ]
    return ANGULAR_COLUMNS, rows, {"g1": str(args.g1), "g2": str(args.g2), "count": args.count}


def _channel(args):
    if args.nu is not None:
        return radial.ChannelParams.from_nu(args.nu, n=args.n, kappa_star=args.kappa_star)
    if args.lam is None:
        raise ValidationError("give either --nu or --lambda")
    return radial.ChannelParams.from_lambda(args.n, args.lam, args.kappa_star)


def cmd_spectrum(args):
    if args.ell_min > args.ell_max:
        raise ValidationError("ell-min must not exceed ell-max")
    p = _channel(args)
    rows = []
    for ell in range(args.ell_min, args.ell_max + 1):
        try:
            b = radial.bound_state(p, ell)
            nxt = radial.bound_state(p, ell + 1)
            rows.append(
                {
                    "ell": ell,
                    "kappa": b.kappa,
                    "energy": b.energy * args.energy_unit,
                    "norm_sq": b.norm**2,
                    "ratio_next": nxt.energy / b.energy,
                }
            )
        except NumericalRangeError as exc:
            # Report per row; the table stays complete.
            rows.append({"ell": ell, "error": type(exc).__name__})
    params = {
        "nu": p.nu, "n": p.n, "kappa_star": p.kappa_star, "energy_unit": args.energy_unit,
        "ell_min": args.ell_min, "ell_max": args.ell_max,
    }
    return SPECTRUM_COLUMNS, rows, params


def cmd_smatrix(args):
    if args.points < 2:
        raise ValidationError("points must be >= 2")
    if not args.k_decades > 0:
        raise ValidationError("k-decades must be positive")
    p = _channel(args)
    half = 0.5 * args.k_decades
    ks = p.kappa_star * np.logspace(-half, half, args.points)
    rows = []
    for k in ks:
        s = radial.s_matrix(p, float(k)).s_value
        rows.append({"k": float(k), "re_s": s.real, "im_s": s.imag, "arg_s": math.atan2(s.imag, s.real), "abs_s": abs(s)})
    params = {"nu": p.nu, "n": p.n, "kappa_star": p.kappa_star, "k_decades": args.k_decades, "points": args.points}
    return SMATRIX_COLUMNS, rows, params


def cmd_wavefunction(args):
    if not 0 < args.r_min < args.r_max:
        raise ValidationError("need 0 < r-min < r-max")
    if args.points < 2:
        raise ValidationError("points must be >= 2")
    p = _channel(args)
    rs = np.geomspace(args.r_min, args.r_max, args.points)
    if args.kind == "bound":
        kappa = radial.bound_state(p, args.ell).kappa
        vals = radial.bound_radial_wavefunction(p, kappa, rs).astype(complex)
    else:
        if args.k is None or not args.k > 0:
            raise ValidationError("scattering wavefunction needs --k > 0")
        vals = radial.scattering_radial_wavefunction(p, args.k, rs)
    rows = [{"r": float(r), "re_R": v.real, "im_R": v.imag} for r, v in zip(rs, vals)]
    params = {
        "nu": p.nu, "n": p.n, "kappa_star": p.kappa_star, "kind": args.kind, "ell": args.ell,
        "k": args.k, "r_min": args.r_min, "r_max": args.r_max, "points": args.points,
    }
    return WAVEFUNCTION_COLUMNS, rows, params


def cmd_verify(args):
    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValidationError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    report = run_suites(names, args.tolerance_profile, args.perturb_nu)
    params = {"suites": names, "tolerance_profile": args.tolerance_profile, "perturb_nu": args.perturb_nu}
    columns = ["suite", "name", "measured", "tolerance", "tolerance_key", "passed"]
    rows = [dict(vars(r)) for r in report.results]
    return columns, rows, params, report.ok


# ---------------------------------------------------------------- parser


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--tolerance-profile", choices=("default", "strict"), default="default")

    channel = _Parser(add_help=False)
    channel.add_argument("--nu", type=float, default=None)
    channel.add_argument("--lambda", dest="lam", type=float, default=None)
    channel.add_argument("--n", type=int, default=3, help="particle number")
    channel.add_argument("--kappa-star", type=float, default=1.0)

    parser = _Parser(prog="dsi1d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phases", parents=[common], help="phase-diagram grid over (g1, g2)")
    p.add_argument("--g1-range", type=float, nargs=2, default=(-2.0, 2.0), metavar=("LO", "HI"))
    p.add_argument("--g2-range", type=float, nargs=2, default=(-2.0, 2.0), metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, default=41)

    p = sub.add_parser("angular", parents=[common], help="lowest angular channels")
    p.add_argument("--g1", type=_parse_coupling, required=True, help="real, 'inf' or 'dirichlet'")
    p.add_argument("--g2", type=_parse_coupling, required=True)
    p.add_argument("--count", type=int, default=5)

    p = sub.add_parser("spectrum", parents=[common, channel], help="bound-state tower")
    p.add_argument("--ell-min", type=int, default=0)
    p.add_argument("--ell-max", type=int, default=5)
    p.add_argument("--energy-unit", type=float, default=1.0, help="value of hbar^2/(2m) in output units")

    p = sub.add_parser("smatrix", parents=[common, channel], help="S-matrix trace over log-spaced k")
    p.add_argument("--k-decades", type=float, default=8.0)
    p.add_argument("--points", type=int, default=801)

    p = sub.add_parser("wavefunction", parents=[common, channel], help="radial wavefunction samples")
    p.add_argument("--kind", choices=("bound", "scattering"), default="bound")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--r-min", type=float, default=1e-3)
    p.add_argument("--r-max", type=float, default=50.0)
    p.add_argument("--points", type=int, default=200)

    p = sub.add_parser("verify", parents=[common], help="closed form versus oracle suites")
    p.add_argument("--suite", action="append", default=None, help=f"one of {sorted(SUITES)}; repeatable")
    p.add_argument("--perturb-nu", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


_COMMANDS = {
    "phases": cmd_phases,
    "angular": cmd_angular,
    "spectrum": cmd_spectrum,
    "smatrix": cmd_smatrix,
    "wavefunction": cmd_wavefunction,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise ValidationError("threads must be >= 1")
        if args.command == "verify":
            columns, rows, params, ok = cmd_verify(args)
            fmt = args.format or "json"
        else:
            columns, rows, params = _COMMANDS[args.command](args)
            ok, fmt = True, args.format or "csv"
        _emit(render(args.command, params, columns, rows, fmt), args.out)
        return EXIT_OK if ok else EXIT_VERIFY
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalRangeError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_RANGE


if __name__ == "__main__":
    sys.exit(main())
