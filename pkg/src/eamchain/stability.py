"""Closed-form stability analysis of the uniformly strained chain.

At the uniform state every model's Hessian is diagonalised by the Fourier
modes of Du, with eigenvalues (relative to ||Du||^2) given by

    atomistic       lambda_a(s)  = A + B s + C s^2 + D s^3
    volume-local    lambda_cv    = A
    recon-local     lambda_cr(s) = A + B_tilde s

evaluated at s_k = 4 sin^2(k pi / 2N), k = 1..N.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .energetics import Deformation, ModelKind, hessian
from .lattice import ChainConfig, fourier_modes, mode_displacement
from .potentials import AssumptionSigns, PotentialSet, signs_from_values

SIGN_RTOL = 1e-12


@dataclass(frozen=True)
class StabilityCoefficients:
    F: float
    A_hat: float
    A_tilde: float
    A: float
    B: float
    B_tilde: float
    C: float
    D: float
    G1: float
    G2: float
    phi2_F: float
    phi2_2F: float
    rho1_F: float
    rho1_2F: float
    rho2_F: float
    rho2_2F: float

    @property
    def kappa(self) -> float:
        """phi''(2F) + 2 G'_F rho''(2F); its sign orders atomistic vs recon."""
        return self.phi2_2F + 2.0 * self.G1 * self.rho2_2F

    @property
    def kappa_scale(self) -> float:
        return abs(self.phi2_2F) + abs(2.0 * self.G1 * self.rho2_2F)

    @property
    def B_scale(self) -> float:
        a, b = self.rho1_F, self.rho1_2F
        return (
            abs(self.phi2_2F)
            + abs(self.G2) * (a * a + 20 * b * b + 12 * abs(a * b))
            + abs(2.0 * self.G1 * self.rho2_2F)
        )

    def signs(self) -> AssumptionSigns:
        return signs_from_values(
            self.phi2_F, self.phi2_2F, self.rho1_F, self.rho1_2F,
            self.rho2_F, self.rho2_2F, self.G2,
        )

    def as_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


def coefficients(p: PotentialSet, F: float) -> StabilityCoefficients:
    for r in (F, 2 * F):
        p.phi.require(r)
        p.rho.require(r)
    rbar = p.host_density(F)
    p.G.require(rbar)

    phi2_F, phi2_2F = float(p.phi.d2(F)), float(p.phi.d2(2 * F))
    a, b = float(p.rho.d1(F)), float(p.rho.d1(2 * F))
    rho2_F, rho2_2F = float(p.rho.d2(F)), float(p.rho.d2(2 * F))
    G1, G2 = float(p.G.d1(rbar)), float(p.G.d2(rbar))

    A_tilde = phi2_F + 4.0 * phi2_2F
    A_hat = 4.0 * G2 * (a + 2 * b) ** 2 + 2.0 * G1 * (rho2_F + 4.0 * rho2_2F)
    B = -(phi2_2F + G2 * (a * a + 20 * b * b + 12 * a * b) + 2.0 * G1 * rho2_2F)
    C = G2 * (8 * b * b + 2 * a * b)
    D = -G2 * b * b
    B_tilde = -G2 * (a + 2 * b) ** 2
    return StabilityCoefficients(
        F=float(F), A_hat=A_hat, A_tilde=A_tilde, A=A_hat + A_tilde, B=B,
        B_tilde=B_tilde, C=C, D=D, G1=G1, G2=G2, phi2_F=phi2_F, phi2_2F=phi2_2F,
        rho1_F=a, rho1_2F=b, rho2_F=rho2_F, rho2_2F=rho2_2F,
    )


def _check_s(s):
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0) or np.any(s_arr > 4.0) or np.any(~np.isfinite(s_arr)):
        raise ValueError(f"s must lie in [0, 4], got {s!r}")
    return s_arr


def lambda_atomistic(c: StabilityCoefficients, s):
    s = _check_s(s)
    out = c.A + s * (c.B + s * (c.C + s * c.D))
    return float(out) if out.ndim == 0 else out


def lambda_volume(c: StabilityCoefficients) -> float:
    return c.A


def lambda_recon(c: StabilityCoefficients, s):
    s = _check_s(s)
    out = c.A + c.B_tilde * s
    return float(out) if out.ndim == 0 else out


def s_star(c: StabilityCoefficients) -> float | None:
    """Local-minimum critical point of lambda_a, or None if it does not exist."""
    disc = c.C * c.C - 3.0 * c.B * c.D
    if not (c.D < 0 and disc > 0):
        return None
    return (c.C - math.sqrt(disc)) / (-3.0 * c.D)


class Case(str, Enum):
    BOUNDARY0 = "Boundary0"
    BOUNDARY4 = "Boundary4"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class StabilityVerdict:
    model: ModelKind
    lambda_min: float
    argmin_s: float
    case: Case
    stable: bool
    N: int | None = None  # None: continuous s in [0, 4]; otherwise the s_k of that N

    def as_dict(self) -> dict:
        return {
            "model": self.model.value,
            "lambda_min": float(self.lambda_min),
            "argmin_s": float(self.argmin_s),
            "case": self.case.value,
            "stable": bool(self.stable),
            "N": self.N,
        }


def _verdict(model, lam, s, case, N):
    return StabilityVerdict(model, float(lam), float(s), case, bool(lam > 0), N)


def _is_nonnegative(x: float, scale: float) -> bool:
    return x >= -SIGN_RTOL * scale


def _atomistic_continuous(c: StabilityCoefficients) -> StabilityVerdict:
    m = ModelKind.ATOMISTIC
    if _is_nonnegative(c.B, c.B_scale):
        return _verdict(m, c.A, 0.0, Case.BOUNDARY0, None)
    lam4 = lambda_atomistic(c, 4.0)
    ss = s_star(c)
    if ss is None and c.D == 0 and c.C > 0:
        # degenerate cubic: the interior minimum of the quadratic
        ss = -c.B / (2.0 * c.C)
    if ss is None or not 0.0 <= ss < 4.0:
        return _verdict(m, lam4, 4.0, Case.BOUNDARY4, None)
    lam_star = lambda_atomistic(c, ss)
    if lam_star < lam4:
        return _verdict(m, lam_star, ss, Case.INTERIOR, None)
    return _verdict(m, lam4, 4.0, Case.BOUNDARY4, None)


def _discrete_case(k: int, N: int) -> Case:
    if k == N:
        return Case.BOUNDARY4
    return Case.BOUNDARY0 if k == 1 else Case.INTERIOR


def min_eigenvalue(c: StabilityCoefficients, model, N: int | None = None) -> StabilityVerdict:
    """Smallest eigenvalue of the second variation at the uniform state.

    With ``N=None`` the minimum is taken over s in [0, 4] using the case
    table for the cubic (exact when C > 0, D < 0 and 8|D| <= C).  With an
    integer ``N`` it is the exact minimum over the symbols s_1..s_N of a
    chain with 2N atoms per period.
    """
    model = ModelKind.parse(model)
    if N is not None and (int(N) != N or N < 1):
        raise ValueError(f"N must be a positive integer, got {N!r}")

    if model is ModelKind.VOLUME:
        s = 0.0 if N is None else float(fourier_modes(N)[0])
        return _verdict(model, c.A, s, Case.BOUNDARY0, N)

    if model is ModelKind.RECONSTRUCTION:
        if N is None:
            lam0, lam4 = c.A, lambda_recon(c, 4.0)
            if lam4 <= lam0:
                return _verdict(model, lam4, 4.0, Case.BOUNDARY4, None)
            return _verdict(model, lam0, 0.0, Case.BOUNDARY0, None)
        s = fourier_modes(N)
        lam = lambda_recon(c, s)
        k = int(np.argmin(lam))
        if c.B_tilde <= 0:
            k = N - 1
        return _verdict(model, lam[k], s[k], _discrete_case(k + 1, N), N)

    if N is None:
        return _atomistic_continuous(c)
    s = fourier_modes(N)
    lam = np.atleast_1d(lambda_atomistic(c, s))
    k = int(np.argmin(lam))
    return _verdict(model, lam[k], s[k], _discrete_case(k + 1, N), N)


def min_eigenvalue_at(p: PotentialSet, F: float, model, N: int | None = None) -> StabilityVerdict:
    return min_eigenvalue(coefficients(p, F), model, N)


class Ordering(str, Enum):
    EQUAL = "Equal"
    ATOMISTIC_SMALLER = "AtomisticSmaller"
    ATOMISTIC_LARGER = "AtomisticLarger"


def compare_volume(c: StabilityCoefficients) -> Ordering:
    """Order min lambda_a against lambda_cv over s in [0, 4]."""
    if _is_nonnegative(c.B, c.B_scale):
        return Ordering.EQUAL
    return Ordering.ATOMISTIC_SMALLER


@dataclass(frozen=True)
class ReconComparison:
    kappa: float
    ordering: Ordering
    reliable: bool  # sign hypotheses on phi, rho, G all hold at F

    def as_dict(self) -> dict:
        return {"kappa": self.kappa, "ordering": self.ordering.value, "reliable": self.reliable}


def compare_recon(c: StabilityCoefficients) -> ReconComparison:
    """Order min lambda_a against min lambda_cr by the sign of kappa."""
    k = c.kappa
    if abs(k) <= SIGN_RTOL * max(c.kappa_scale, 1e-300):
        order = Ordering.EQUAL
    elif k > 0:
        order = Ordering.ATOMISTIC_SMALLER
    else:
        order = Ordering.ATOMISTIC_LARGER
    return ReconComparison(float(k), order, c.signs().all_hold)


@dataclass(frozen=True)
class CounterexampleReport:
    """Comparison of the volume model with the atomistic alternating mode."""

    F: float
    N: int
    precondition: float
    precondition_holds: bool
    rayleigh_alternating: float
    alternating_formula: float
    lambda_volume: float
    lambda_atomistic_min: float
    margin: float
    inequality_holds: bool | None

    def as_dict(self) -> dict:
        return asdict(self)


def counterexample_check(p: PotentialSet, F: float, N: int = 64) -> CounterexampleReport:
    """Check that the volume model can be strictly more stable than the chain.

    When phi''_2F + G''_F (rho'_F + 2 rho'_2F)^2 + 2 G'_F rho''_2F > 0, the
    alternating displacement has a Rayleigh quotient phi''_F + 2 G'_F rho''_F
    strictly below A_F, so inf lambda_cv > inf lambda_a.  The Rayleigh
    quotient is taken from the assembled Hessian and the atomistic minimum
    from the discrete spectrum for the given ``N``.
    """
    c = coefficients(p, F)
    pre = c.phi2_2F + c.G2 * (c.rho1_F + 2 * c.rho1_2F) ** 2 + 2.0 * c.G1 * c.rho2_2F
    holds = bool(pre > 0)
    cfg = ChainConfig(N, F)
    u = mode_displacement(N, N)
    H = hessian(ModelKind.ATOMISTIC, Deformation.uniform(cfg), p)
    rq = float(u @ H @ u)
    formula = c.phi2_F + 2.0 * c.G1 * c.rho2_F
    lam_a = min_eigenvalue(c, ModelKind.ATOMISTIC, N).lambda_min
    margin = c.A - rq
    ineq = None
    if holds:
        ineq = bool(c.A > rq and rq >= lam_a - 1e-12 * max(1.0, abs(rq)))
    return CounterexampleReport(
        F=float(F), N=N, precondition=float(pre), precondition_holds=holds,
        rayleigh_alternating=rq, alternating_formula=float(formula),
        lambda_volume=c.A, lambda_atomistic_min=float(lam_a),
        margin=float(margin), inequality_holds=ineq,
    )
