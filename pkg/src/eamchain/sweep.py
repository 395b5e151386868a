"""Strain sweeps, critical-strain bisection and report serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .energetics import ModelKind
from .errors import DomainViolation, NoSignChange
from .potentials import PotentialSet
from .stability import Case, coefficients, min_eigenvalue, SIGN_RTOL

DEFAULT_N = 64
MODELS = (ModelKind.ATOMISTIC, ModelKind.VOLUME, ModelKind.RECONSTRUCTION)
CSV_COLUMNS = [
    "F", "lam_a", "lam_cv", "lam_cr", "stable_a", "stable_cv", "stable_cr",
    "B_sign", "kappa_sign",
]


def _sign(x: float, scale: float) -> str:
    if abs(x) <= SIGN_RTOL * max(scale, 1e-300):
        return "0"
    return "+" if x > 0 else "-"


@dataclass(frozen=True)
class SweepRow:
    F: float
    lam_a: float
    lam_cv: float
    lam_cr: float
    stable_a: bool
    stable_cv: bool
    stable_cr: bool
    B_sign: str
    kappa_sign: str
    valid: bool = True

    @classmethod
    def invalid(cls, F: float) -> "SweepRow":
        nan = math.nan
        return cls(F, nan, nan, nan, False, False, False, "", "", valid=False)

    def as_dict(self) -> dict:
        return {
            "F": self.F, "lam_a": self.lam_a, "lam_cv": self.lam_cv, "lam_cr": self.lam_cr,
            "stable_a": self.stable_a, "stable_cv": self.stable_cv, "stable_cr": self.stable_cr,
            "B_sign": self.B_sign, "kappa_sign": self.kappa_sign, "valid": self.valid,
        }


def sweep_row(p: PotentialSet, F: float, N: int | None = DEFAULT_N) -> SweepRow:
    try:
        c = coefficients(p, F)
    except DomainViolation:
        return SweepRow.invalid(float(F))
    lam = [min_eigenvalue(c, m, N).lambda_min for m in MODELS]
    return SweepRow(
        float(F), *lam, *(x > 0 for x in lam),
        B_sign=_sign(c.B, c.B_scale), kappa_sign=_sign(c.kappa, c.kappa_scale),
    )


def sweep_strains(
    p: PotentialSet,
    F_grid: Sequence[float],
    N: int | None = DEFAULT_N,
    workers: int = 1,
) -> list[SweepRow]:
    """One row per strain; rows stay in grid order whatever ``workers`` is."""
    grid = [float(F) for F in F_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("strain grid must be strictly increasing")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda F: sweep_row(p, F, N), grid))
    return [sweep_row(p, F, N) for F in grid]


class Side(str, Enum):
    TENSILE = "Tensile"
    COMPRESSIVE = "Compressive"


@dataclass(frozen=True)
class CriticalStrainReport:
    model: ModelKind
    F_crit: float
    bracket: tuple[float, float]
    tol: float
    side: Side
    iterations: int
    N: int | None = DEFAULT_N
    case_switches: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "model": self.model.value,
            "F_crit": self.F_crit,
            "bracket": list(self.bracket),
            "tol": self.tol,
            "side": self.side.value,
            "iterations": self.iterations,
            "N": self.N,
            "case_switches": list(self.case_switches),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CriticalStrainReport":
        return cls(
            model=ModelKind.parse(d["model"]), F_crit=float(d["F_crit"]),
            bracket=(float(d["bracket"][0]), float(d["bracket"][1])), tol=float(d["tol"]),
            side=Side(d["side"]), iterations=int(d["iterations"]), N=d.get("N"),
            case_switches=tuple(float(x) for x in d.get("case_switches", ())),
        )


def bisect(fn: Callable[[float], float], lo: float, hi: float, tol: float):
    """Bisection on a sign change of ``fn``.

    Returns (midpoint, final bracket, iteration count, values at the
    original ends).  Each iteration halves the bracket exactly.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not hi > lo:
        raise ValueError("bracket must satisfy lo < hi")
    f_lo, f_hi = fn(lo), fn(hi)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or f_lo * f_hi > 0 or (f_lo == 0 and f_hi == 0):
        raise NoSignChange(f"no sign change on [{lo}, {hi}]: f = {f_lo:.6g}, {f_hi:.6g}")
    a, b, fa = lo, hi, f_lo
    iterations = 0
    max_iter = max(0, math.ceil(math.log2((hi - lo) / tol)))
    while b - a > tol and iterations < max_iter:
        mid = 0.5 * (a + b)
        fm = fn(mid)
        iterations += 1
        if fm == 0:
            a = b = mid
            break
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b), (a, b), iterations, (f_lo, f_hi)


def critical_strain(
    p: PotentialSet,
    model,
    bracket: tuple[float, float],
    tol: float = 1e-10,
    N: int | None = DEFAULT_N,
) -> CriticalStrainReport:
    """Strain in ``bracket`` where the model's smallest eigenvalue changes sign."""
    model = ModelKind.parse(model)
    cases: list[tuple[float, Case]] = []

    def lam(F: float) -> float:
        v = min_eigenvalue(coefficients(p, F), model, N)
        cases.append((F, v.case))
        return v.lambda_min

    F_crit, (a, b), its, (f_lo, _) = bisect(lam, float(bracket[0]), float(bracket[1]), tol)
    seq = sorted(cases)
    switches = tuple(
        0.5 * (F0 + F1) for (F0, c0), (F1, c1) in zip(seq, seq[1:]) if c0 is not c1
    )
    side = Side.TENSILE if f_lo > 0 else Side.COMPRESSIVE
    return CriticalStrainReport(model, F_crit, (a, b), float(tol), side, its, N, switches)


def find_bracket(
    p: PotentialSet,
    model,
    F_grid: Sequence[float],
    N: int | None = DEFAULT_N,
    side: Side = Side.TENSILE,
) -> tuple[float, float] | None:
    """First adjacent grid pair on which the model loses (tensile) or gains stability."""
    model = ModelKind.parse(model)
    prev = None
    for F in F_grid:
        try:
            lam = min_eigenvalue(coefficients(p, F), model, N).lambda_min
        except DomainViolation:
            prev = None
            continue
        if prev is not None:
            F0, lam0 = prev
            if side is Side.TENSILE and lam0 > 0 >= lam:
                return (F0, float(F))
            if side is Side.COMPRESSIVE and lam0 <= 0 < lam:
                return (F0, float(F))
        prev = (float(F), lam)
    return None


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def emit_report(
    rows: Iterable[SweepRow] = (),
    reports: Iterable[CriticalStrainReport] = (),
    fmt: str = "csv",
) -> str:
    """Serialise sweep rows (CSV or JSON) and/or critical-strain reports (JSON).

    CSV carries sweep rows only.  JSON is an array of row objects, or an
    object ``{"rows": [...], "critical": [...]}`` when reports are given.
    """
    rows, reports = list(rows), list(reports)
    fmt = fmt.lower()
    if fmt == "csv":
        if reports:
            raise ValueError("critical-strain reports are emitted as JSON")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            d = r.as_dict()
            w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        row_objs = [r.as_dict() for r in rows]
        if not reports:
            return json.dumps(row_objs, indent=1, allow_nan=True) + "\n"
        return json.dumps(
            {"rows": row_objs, "critical": [r.as_dict() for r in reports]},
            indent=1, allow_nan=True,
        ) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _row_from_strings(d: dict) -> SweepRow:
    def flag(x):
        return x in ("1", "true", "True", True)

    lam = [float(d[k]) for k in ("lam_a", "lam_cv", "lam_cr")]
    return SweepRow(
        float(d["F"]), *lam, flag(d["stable_a"]), flag(d["stable_cv"]), flag(d["stable_cr"]),
        d["B_sign"], d["kappa_sign"], valid=not any(math.isnan(x) for x in lam),
    )


def parse_report(text: str, fmt: str = "csv"):
    """Inverse of :func:`emit_report`."""
    fmt = fmt.lower()
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        return [_row_from_strings(d) for d in reader]
    if fmt == "json":
        data = json.loads(text)
        if isinstance(data, list):
            return [SweepRow(**d) for d in data]
        return (
            [SweepRow(**d) for d in data["rows"]],
            [CriticalStrainReport.from_dict(d) for d in data["critical"]],
        )
    raise ValueError(f"unknown format {fmt!r}")
