"""Command-line entry point: ``eamchain {spectrum,sweep,critical,check,solve}``.

Exit status is 0 on success, 1 when a check fails or a solver does not
converge, and 2 on usage errors.  Output goes to ``--output`` or stdout
and depends only on the arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .energetics import (
    DeadLoads,
    Deformation,
    ModelKind,
    equilibrium_solve,
    read_values_csv,
)
from .errors import DomainViolation, NoConvergence, NoSignChange, SingularHessian
from .lattice import ChainConfig
from .potentials import ToyFamilyParams, check_assumption_signs, make_toy_potentials
from .spectral import verify_diagonalization
from .stability import (
    Ordering,
    coefficients,
    compare_recon,
    compare_volume,
    counterexample_check,
    lambda_atomistic,
    lambda_recon,
    min_eigenvalue,
)
from .sweep import (
    MODELS,
    Side,
    critical_strain,
    emit_report,
    find_bracket,
    sweep_strains,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DIAG_RTOL = 1e-9


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v != float(text) or v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not (np.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text!r}")
    return v


def _model(text: str) -> str:
    if text.lower() == "all":
        return "all"
    try:
        return ModelKind.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_common(sp: argparse.ArgumentParser, default_format: str) -> None:
    g = sp.add_argument_group("potential and chain")
    g.add_argument("--alpha", type=_positive_float, default=4.0, help="Morse stiffness")
    g.add_argument("--beta", type=_positive_float, default=3.0, help="density decay rate")
    g.add_argument("--c", type=_nonneg_float, default=1.0, help="embedding strength")
    g.add_argument("--rho-floor", type=_positive_float, default=1e-8, help="lower guard on G's domain")
    g.add_argument("--N", type=_positive_int, default=64, help="half-period atom count (2N atoms)")
    g.add_argument("--mode", choices=("discrete", "continuous"), default="discrete",
                   help="minimise over the s_k of N, or over all s in [0, 4]")
    o = sp.add_argument_group("output")
    o.add_argument("--output", default="-", help="output file, '-' for stdout")
    o.add_argument("--format", choices=("csv", "json"), default=default_format, help="output format")
    o.add_argument("--config", default=None, help="key=value file of flag defaults; flags override")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    fmt = argparse.ArgumentDefaultsHelpFormatter

    parser = argparse.ArgumentParser(
        prog="eamchain",
        description="Stability spectra and critical strains of a periodic EAM chain.",
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    def add(name, help_, default_format="json"):
        sp = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        _add_common(sp, default_format)
        subs[name] = sp
        return sp

    sp = add("spectrum", "dense-oracle spectrum at a uniform strain vs the analytic eigenvalues")
    sp.add_argument("--model", type=_model, default="atomistic", help="atomistic, volume or reconstruction")
    sp.add_argument("--F", type=_positive_float, default=1.0, help="uniform strain")

    sp = add("sweep", "minimum eigenvalue of each model over a strain grid", "csv")
    sp.add_argument("--F-min", type=_positive_float, default=0.8, help="first strain")
    sp.add_argument("--F-max", type=_positive_float, default=1.5, help="last strain")
    sp.add_argument("--steps", type=_positive_int, default=70, help="grid intervals (steps+1 rows)")
    sp.add_argument("--workers", type=_positive_int, default=1, help="threads for grid evaluation")

    sp = add("critical", "bisection for the strain where each model loses stability")
    sp.add_argument("--model", type=_model, default="all", help="model name or 'all'")
    sp.add_argument("--F-min", type=_positive_float, default=0.8, help="bracket search start")
    sp.add_argument("--F-max", type=_positive_float, default=1.5, help="bracket search end")
    sp.add_argument("--steps", type=_positive_int, default=70, help="bracket search intervals")
    sp.add_argument("--side", choices=("tensile", "compressive"), default="tensile",
                    help="look for loss (tensile) or gain (compressive) of stability along the grid")
    sp.add_argument("--tol", type=_positive_float, default=1e-10, help="final bracket width")

    sp = add("check", "run the stability checks at one strain; exit 1 if any fails")
    sp.add_argument("--F", type=_positive_float, default=1.0, help="uniform strain")

    sp = add("solve", "Newton equilibrium under dead loads read from a file", "csv")
    sp.add_argument("--loads", required=False, default=None,
                    help="CSV with one load per line (2N lines, order l = -N+1..N)")
    sp.add_argument("--model", type=_model, default="atomistic", help="atomistic, volume or reconstruction")
    sp.add_argument("--F", type=_positive_float, default=1.0, help="uniform strain of the reference state")
    sp.add_argument("--tol", type=_positive_float, default=1e-10, help="residual tolerance")
    sp.add_argument("--max-iter", type=_positive_int, default=50, help="Newton iteration budget")
    return parser, subs


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def parse_args(argv=None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = _read_config(args.config)
        except UsageError as exc:
            subs[args.command].error(str(exc))
        sp = subs[args.command]
        known = {a.dest for a in sp._actions}
        bad = sorted(set(cfg) - known - {"config"})
        if bad:
            sp.error(f"unknown config keys: {', '.join(bad)}")
        sp.set_defaults(**{k: v for k, v in cfg.items() if k != "config"})
        args = parser.parse_args(argv)
    if getattr(args, "F_min", None) is not None and not args.F_max > args.F_min:
        subs[args.command].error("--F-max must exceed --F-min")
    if args.command == "solve" and not args.loads:
        subs[args.command].error("--loads is required")
    return args


def _potentials(args):
    return make_toy_potentials(ToyFamilyParams(args.alpha, args.beta, args.c, args.rho_floor))


def _N(args):
    return None if args.mode == "continuous" else args.N


def _grid(args):
    return np.linspace(args.F_min, args.F_max, args.steps + 1)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def cmd_spectrum(args, p):
    rep = verify_diagonalization(args.model, p, args.F, args.N)
    A = coefficients(p, args.F).A
    ok = rep.multiplicity_ok and rep.max_abs_mismatch <= DIAG_RTOL * (1 + abs(A))
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    d = rep.as_dict()
    d["k"] = [int(k) for k in rep.k]
    d["s"] = [float(s) for s in rep.s]
    d["multiplicity_ok"] = rep.multiplicity_ok
    d["agrees"] = bool(ok)
    return _json(d), EXIT_OK


def cmd_sweep(args, p):
    rows = sweep_strains(p, _grid(args), _N(args), workers=args.workers)
    return emit_report(rows, fmt=args.format), EXIT_OK


def cmd_critical(args, p):
    models = MODELS if args.model == "all" else (ModelKind.parse(args.model),)
    side = Side.TENSILE if args.side == "tensile" else Side.COMPRESSIVE
    reports, missing = [], []
    for m in models:
        br = find_bracket(p, m, _grid(args), _N(args), side)
        if br is None:
            missing.append(m.value)
            continue
        reports.append(critical_strain(p, m, br, args.tol, _N(args)))
    status = EXIT_FAIL if missing else EXIT_OK
    if args.format == "csv":
        rows = [
            [r.model.value, f"{r.F_crit:.17g}", f"{r.bracket[0]:.17g}", f"{r.bracket[1]:.17g}",
             f"{r.tol:.17g}", r.side.value, r.iterations]
            for r in reports
        ]
        text = _rows_csv(["model", "F_crit", "F_lo", "F_hi", "tol", "side", "iterations"], rows)
    else:
        text = _json({"critical": [r.as_dict() for r in reports], "no_bracket": missing})
    return text, status


def stability_checks(p, F: float, N: int) -> list[dict]:
    """Assumption signs, coefficient conditions, diagonalisation and the comparisons."""
    c = coefficients(p, F)
    checks = []

    def record(name, passed, skipped=False, **details):
        checks.append({"name": name, "passed": bool(passed), "skipped": skipped, **details})

    signs = check_assumption_signs(p, F)
    record("assumption_signs", signs.all_hold, **signs.as_dict())

    cond = c.C > 0 and c.D < 0 and 8 * abs(c.D) <= c.C
    record("condition1", cond or not signs.all_hold, skipped=not signs.all_hold,
           C=c.C, D=c.D)

    for m in MODELS:
        rep = verify_diagonalization(m, p, F, N)
        bound = DIAG_RTOL * (1 + abs(c.A))
        record(f"diagonalization_{m.value}",
               rep.multiplicity_ok and rep.max_abs_mismatch <= bound,
               max_abs_mismatch=rep.max_abs_mismatch, bound=bound)

    grid = np.linspace(0.0, 4.0, 100001)
    lam_min = float(np.min(lambda_atomistic(c, grid)))
    vol = compare_volume(c)
    scale = max(abs(c.A), 1.0)
    if vol is Ordering.EQUAL:
        ok = abs(lam_min - c.A) <= 1e-10 * scale
    else:
        ok = lam_min < c.A
    record("compare_volume", ok, ordering=vol.value, B=c.B)

    rc = compare_recon(c)
    gap4 = lambda_atomistic(c, 4.0) - lambda_recon(c, 4.0)
    ok = abs(gap4 + 4 * rc.kappa) <= 1e-10 * max(c.kappa_scale, 1.0)
    if rc.reliable:
        a_min = min_eigenvalue(c, "atomistic").lambda_min
        r_min = min_eigenvalue(c, "reconstruction").lambda_min
        tol = 1e-10 * scale
        expect = {
            Ordering.EQUAL: abs(a_min - r_min) <= tol,
            Ordering.ATOMISTIC_SMALLER: a_min < r_min,
            Ordering.ATOMISTIC_LARGER: a_min > r_min,
        }[rc.ordering]
        ok = ok and expect
    record("compare_recon", ok, **rc.as_dict())

    cx = counterexample_check(p, F, N)
    record("counterexample", cx.inequality_holds is not False, skipped=not cx.precondition_holds,
           precondition=cx.precondition, rayleigh=cx.rayleigh_alternating, lambda_volume=cx.lambda_volume)
    return checks


def cmd_check(args, p):
    checks = stability_checks(p, args.F, args.N)
    passed = all(ch["passed"] for ch in checks)
    if args.format == "csv":
        text = _rows_csv(["name", "passed", "skipped"],
                         [[ch["name"], int(ch["passed"]), int(ch["skipped"])] for ch in checks])
    else:
        text = _json({"F": args.F, "N": args.N, "all_passed": passed, "checks": checks})
    return text, EXIT_OK if passed else EXIT_FAIL


def cmd_solve(args, p):
    try:
        f = read_values_csv(args.loads)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read loads {args.loads!r}: {exc}") from None
    if f.size < 2 or f.size % 2:
        raise UsageError(f"loads file must hold 2N values, got {f.size}")
    cfg = ChainConfig(f.size // 2, args.F)
    history: list[float] = []
    try:
        y = equilibrium_solve(args.model, DeadLoads(f), Deformation.uniform(cfg), p,
                              tol=args.tol, max_iter=args.max_iter, history=history)
    except (NoConvergence, SingularHessian) as exc:
        print(f"eamchain solve: {exc}", file=sys.stderr)
        return _json({"converged": False, "error": str(exc), "residuals": history}), EXIT_FAIL
    if args.format == "csv":
        return "".join(f"{v:.17g}\n" for v in y.y), EXIT_OK
    return _json({
        "converged": True, "model": ModelKind.parse(args.model).value, "F": args.F, "N": cfg.N,
        "iterations": len(history) - 1, "residuals": history, "y": [float(v) for v in y.y],
    }), EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "check": cmd_check,
    "solve": cmd_solve,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        p = _potentials(args)
        text, status = COMMANDS[args.command](args, p)
    except UsageError as exc:
        print(f"eamchain {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainViolation, NoSignChange, ValueError) as exc:
        print(f"eamchain {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
