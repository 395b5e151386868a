"""Constitutive functions of the EAM chain: pair potential, density, embedding.

Every function carries analytic first and second derivatives.  The toy family
used throughout the package is

    phi(r) = exp(-2 alpha (r - 1)) - 2 exp(-alpha (r - 1))     (Morse)
    rho(r) = exp(-beta r)
    G(x)   = -c sqrt(x)                                         (x >= rho_floor)

Distances are measured in reference units where the lattice spacing is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .errors import DomainViolation

ArrayFn = Callable[[np.ndarray], np.ndarray]

FD_STEP = 1e-5
ABS_FALLBACK = 1e-8


@dataclass(frozen=True)
class ScalarFunction2:
    """A scalar function with analytic first and second derivatives.

    ``domain`` is the open interval on which the function may be evaluated
    by the energy routines.
    """

    eval: ArrayFn
    d1: ArrayFn
    d2: ArrayFn
    domain: tuple[float, float] = (-math.inf, math.inf)
    name: str = "f"

    def __call__(self, x):
        return self.eval(x)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        return bool(np.all(np.isfinite(x)) and np.all(x > lo) and np.all(x < hi))

    def require(self, x) -> None:
        if not self.contains(x):
            x = np.atleast_1d(np.asarray(x, dtype=float))
            lo, hi = self.domain
            bad = x[~((x > lo) & (x < hi))]
            raise DomainViolation(
                f"{self.name}: argument {bad[0] if bad.size else x[0]!r} "
                f"outside domain ({lo}, {hi})"
            )


@dataclass(frozen=True)
class PotentialSet:
    phi: ScalarFunction2
    rho: ScalarFunction2
    G: ScalarFunction2

    def host_density(self, F: float) -> float:
        """Electron density at any atom of the uniform chain with spacing F."""
        return float(2.0 * self.rho(F) + 2.0 * self.rho(2.0 * F))


@dataclass(frozen=True)
class ToyFamilyParams:
    alpha: float = 4.0
    beta: float = 3.0
    c: float = 1.0
    rho_floor: float = 1e-8

    def __post_init__(self):
        for name in ("alpha", "beta", "rho_floor"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        if not (np.isfinite(self.c) and self.c >= 0):
            raise ValueError(f"c must be non-negative, got {self.c!r}")


def make_toy_potentials(params: ToyFamilyParams) -> PotentialSet:
    a, b, c = params.alpha, params.beta, params.c

    def phi(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-2 * a * (r - 1)) - 2 * np.exp(-a * (r - 1))

    def dphi(r):
        r = np.asarray(r, dtype=float)
        return -2 * a * np.exp(-2 * a * (r - 1)) + 2 * a * np.exp(-a * (r - 1))

    def d2phi(r):
        r = np.asarray(r, dtype=float)
        return 4 * a * a * np.exp(-2 * a * (r - 1)) - 2 * a * a * np.exp(-a * (r - 1))

    def rho(r):
        return np.exp(-b * np.asarray(r, dtype=float))

    def drho(r):
        return -b * np.exp(-b * np.asarray(r, dtype=float))

    def d2rho(r):
        return b * b * np.exp(-b * np.asarray(r, dtype=float))

    def G(x):
        return -c * np.sqrt(np.asarray(x, dtype=float))

    def dG(x):
        return -0.5 * c / np.sqrt(np.asarray(x, dtype=float))

    def d2G(x):
        return 0.25 * c * np.asarray(x, dtype=float) ** -1.5

    positive = (0.0, math.inf)
    return PotentialSet(
        phi=ScalarFunction2(phi, dphi, d2phi, positive, "phi"),
        rho=ScalarFunction2(rho, drho, d2rho, positive, "rho"),
        G=ScalarFunction2(G, dG, d2G, (params.rho_floor, math.inf), "G"),
    )


def _rel_err(exact: np.ndarray, approx: np.ndarray) -> np.ndarray:
    err = np.abs(exact - approx)
    scale = np.abs(exact)
    return np.where(scale < ABS_FALLBACK, err, err / np.where(scale == 0, 1.0, scale))


def check_derivatives(f: ScalarFunction2, points: Iterable[float], h: float = FD_STEP) -> float:
    """Largest relative error of ``d1``/``d2`` against central differences.

    ``d1`` is compared with the central difference of ``eval`` and ``d2``
    with the central difference of ``d1``.  Values smaller than 1e-8 in
    magnitude are compared in absolute terms.
    """
    x = np.asarray(list(points), dtype=float)
    lo, hi = f.domain
    if np.any(x - h <= lo) or np.any(x + h >= hi):
        raise DomainViolation(f"{f.name}: check points must lie inside {f.domain} with margin {h}")
    fd1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    fd2 = (f.d1(x + h) - f.d1(x - h)) / (2 * h)
    e1 = _rel_err(np.asarray(f.d1(x), dtype=float), fd1)
    e2 = _rel_err(np.asarray(f.d2(x), dtype=float), fd2)
    return float(max(e1.max(initial=0.0), e2.max(initial=0.0)))


@dataclass(frozen=True)
class AssumptionSigns:
    """Sign pattern of the constitutive derivatives at a uniform strain."""

    phi2_F_positive: bool
    phi2_2F_negative: bool
    rho1_F_nonpositive: bool
    rho1_2F_nonpositive: bool
    rho2_F_nonnegative: bool
    rho2_2F_nonnegative: bool
    G2_nonnegative: bool

    @property
    def all_hold(self) -> bool:
        return all(getattr(self, fl.name) for fl in fields(self))

    def as_dict(self) -> dict[str, bool]:
        d = {fl.name: getattr(self, fl.name) for fl in fields(self)}
        d["all_hold"] = self.all_hold
        return d


def signs_from_values(phi2_F, phi2_2F, rho1_F, rho1_2F, rho2_F, rho2_2F, G2) -> AssumptionSigns:
    return AssumptionSigns(
        phi2_F_positive=bool(phi2_F > 0),
        phi2_2F_negative=bool(phi2_2F < 0),
        rho1_F_nonpositive=bool(rho1_F <= 0),
        rho1_2F_nonpositive=bool(rho1_2F <= 0),
        rho2_F_nonnegative=bool(rho2_F >= 0),
        rho2_2F_nonnegative=bool(rho2_2F >= 0),
        G2_nonnegative=bool(G2 >= 0),
    )


def check_assumption_signs(p: PotentialSet, F: float) -> AssumptionSigns:
    for r in (F, 2 * F):
        p.phi.require(r)
        p.rho.require(r)
    rbar = p.host_density(F)
    p.G.require(rbar)
    return signs_from_values(
        float(p.phi.d2(F)), float(p.phi.d2(2 * F)),
        float(p.rho.d1(F)), float(p.rho.d1(2 * F)),
        float(p.rho.d2(F)), float(p.rho.d2(2 * F)),
        float(p.G.d2(rbar)),
    )


def read_toy_config(path: str | Path) -> dict[str, float]:
    """Parse a ``key=value`` file of toy-family parameters.

    Blank lines and ``#`` comments are ignored.  Only the keys alpha, beta,
    c and rho_floor are accepted; missing keys are simply absent from the
    returned dict.
    """
    allowed = {fl.name for fl in fields(ToyFamilyParams)}
    out: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in allowed:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = float(value)
    return out


def load_toy_params(path: str | Path) -> ToyFamilyParams:
    return ToyFamilyParams(**read_toy_config(path))
