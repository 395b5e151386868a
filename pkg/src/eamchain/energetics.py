"""Energies, forces and Hessians of the atomistic chain and its local models.

All three models are written in terms of the scaled bond lengths
y'_l = (y_l - y_{l-1}) / eps.  A model is described by two lists of terms
``(weight, shifts)``; a term contributes the bond length
r_l = sum(y'_{l+s} for s in shifts), so ``(0, -1)`` is the second-neighbour
bond y'_l + y'_{l-1} and ``(0, 0)`` is the Cauchy-Born doubled bond 2 y'_l.

* density terms build the electron density at atom l,
  rho_bar_l = sum_d w_d rho(r^d_l), which enters G;
* pair terms build the pair energy sum_p w_p phi(r^p_l).

The total internal energy is eps * sum_l [G(rho_bar_l) + pair_l].  For the
volume-based model the per-atom embedding (G(rho_bar_l) + G(rho_bar_{l+1}))/2
sums to the same periodic total, so it is stored with unit weight.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import NoConvergence, SingularHessian
from .lattice import ChainConfig, diff, is_zero_mean
from .potentials import PotentialSet

log = logging.getLogger(__name__)

Terms = tuple[tuple[float, tuple[int, ...]], ...]


class ModelKind(str, Enum):
    ATOMISTIC = "atomistic"
    VOLUME = "volume"
    RECONSTRUCTION = "reconstruction"

    @classmethod
    def parse(cls, name: "str | ModelKind") -> "ModelKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "a": cls.ATOMISTIC, "atom": cls.ATOMISTIC, "atomistic": cls.ATOMISTIC,
            "cv": cls.VOLUME, "volume": cls.VOLUME, "volume-local": cls.VOLUME,
            "volumelocal": cls.VOLUME, "reconstructionlocal": cls.RECONSTRUCTION,
            "cr": cls.RECONSTRUCTION, "recon": cls.RECONSTRUCTION,
            "reconstruction": cls.RECONSTRUCTION, "reconstruction-local": cls.RECONSTRUCTION,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown model {name!r}") from None


_LOCAL_PAIR: Terms = ((0.5, (0,)), (0.5, (0, 0)), (0.5, (1,)), (0.5, (1, 1)))

DENSITY_TERMS: dict[ModelKind, Terms] = {
    ModelKind.ATOMISTIC: ((1.0, (0,)), (1.0, (0, -1)), (1.0, (1,)), (1.0, (1, 2))),
    ModelKind.VOLUME: ((2.0, (0,)), (2.0, (0, 0))),
    ModelKind.RECONSTRUCTION: ((1.0, (0,)), (1.0, (0, 0)), (1.0, (1,)), (1.0, (1, 1))),
}

PAIR_TERMS: dict[ModelKind, Terms] = {
    ModelKind.ATOMISTIC: ((0.5, (0,)), (0.5, (0, -1)), (0.5, (1,)), (0.5, (1, 2))),
    ModelKind.VOLUME: _LOCAL_PAIR,
    ModelKind.RECONSTRUCTION: _LOCAL_PAIR,
}


@dataclass(frozen=True)
class Deformation:
    """Positions y = y_F + u of one period of the chain."""

    y: np.ndarray
    cfg: ChainConfig

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        if y.shape != (self.cfg.size,):
            raise ValueError(f"expected {self.cfg.size} positions, got shape {y.shape}")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @classmethod
    def uniform(cls, cfg: ChainConfig) -> "Deformation":
        return cls(cfg.uniform(), cfg)

    @classmethod
    def from_displacement(cls, u, cfg: ChainConfig) -> "Deformation":
        return cls(cfg.uniform() + np.asarray(u, dtype=float), cfg)

    @property
    def displacement(self) -> np.ndarray:
        return self.y - self.cfg.uniform()

    @property
    def strains(self) -> np.ndarray:
        """Scaled bond lengths y'_l, including the periodic jump of 2F."""
        return self.cfg.F + diff(self.displacement, 1, self.cfg)

    def is_admissible(self) -> bool:
        return is_zero_mean(self.displacement)


@dataclass(frozen=True)
class DeadLoads:
    f: np.ndarray

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        if f.ndim != 1:
            raise ValueError("loads must be a one-dimensional sequence")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @classmethod
    def zeros(cls, cfg: ChainConfig) -> "DeadLoads":
        return cls(np.zeros(cfg.size))


def _bond(v: np.ndarray, shifts: tuple[int, ...]) -> np.ndarray:
    return sum(np.roll(v, -s) for s in shifts)


def _spread(x: np.ndarray, shifts: tuple[int, ...]) -> np.ndarray:
    # adjoint of _bond
    return sum(np.roll(x, s) for s in shifts)


def _shift_matrix(n: int, shifts: tuple[int, ...]) -> np.ndarray:
    T = np.zeros((n, n))
    rows = np.arange(n)
    for s in shifts:
        np.add.at(T, (rows, (rows + s) % n), 1.0)
    return T


def _bonds(model: ModelKind, v: np.ndarray, p: PotentialSet):
    dens = [(w, sh, _bond(v, sh)) for w, sh in DENSITY_TERMS[model]]
    pair = [(w, sh, _bond(v, sh)) for w, sh in PAIR_TERMS[model]]
    for _, _, r in dens:
        p.rho.require(r)
    for _, _, r in pair:
        p.phi.require(r)
    rbar = sum(w * p.rho(r) for w, _, r in dens)
    p.G.require(rbar)
    return dens, pair, rbar


def _check_loads(loads: DeadLoads | None, cfg: ChainConfig) -> np.ndarray:
    if loads is None:
        return np.zeros(cfg.size)
    if loads.f.shape != (cfg.size,):
        raise ValueError(f"expected {cfg.size} loads, got {loads.f.shape[0]}")
    return loads.f


def electron_density(model, y: Deformation, p: PotentialSet, ell: int | None = None):
    """Electron density at lattice index ``ell`` (all atoms when ``None``).

    ``ell`` is a lattice index, reduced periodically into -N+1..N.
    """
    model = ModelKind.parse(model)
    _, _, rbar = _bonds(model, y.strains, p)
    if ell is None:
        return rbar
    N = y.cfg.N
    return float(rbar[(ell + N - 1) % (2 * N)])


def internal_energy(model, y: Deformation, p: PotentialSet) -> float:
    model = ModelKind.parse(model)
    dens, pair, rbar = _bonds(model, y.strains, p)
    site = p.G(rbar) + sum(w * p.phi(r) for w, _, r in pair)
    return float(y.cfg.epsilon * np.sum(site))


def pair_energy(model, y: Deformation, p: PotentialSet) -> float:
    """Pair-potential part of the internal energy."""
    model = ModelKind.parse(model)
    _, pair, _ = _bonds(model, y.strains, p)
    return float(y.cfg.epsilon * np.sum(sum(w * p.phi(r) for w, _, r in pair)))


def load_energy(y: Deformation, loads: DeadLoads | None) -> float:
    f = _check_loads(loads, y.cfg)
    return float(-y.cfg.epsilon * np.dot(f, y.y))


def energy(model, y: Deformation, p: PotentialSet, loads: DeadLoads | None = None) -> float:
    return internal_energy(model, y, p) + load_energy(y, loads)


def _gradient_wrt_strains(model: ModelKind, v: np.ndarray, p: PotentialSet) -> np.ndarray:
    dens, pair, rbar = _bonds(model, v, p)
    g1 = p.G.d1(rbar)
    gv = np.zeros_like(v)
    for w, sh, r in dens:
        gv += w * _spread(g1 * p.rho.d1(r), sh)
    for w, sh, r in pair:
        gv += w * _spread(p.phi.d1(r), sh)
    return gv


def gradient(model, y: Deformation, p: PotentialSet, loads: DeadLoads | None = None) -> np.ndarray:
    """Partial derivatives dE_tot/dy_l, l = -N+1..N."""
    model = ModelKind.parse(model)
    f = _check_loads(loads, y.cfg)
    gv = _gradient_wrt_strains(model, y.strains, p)
    return gv - np.roll(gv, -1) - y.cfg.epsilon * f


def _hessian_wrt_strains(model: ModelKind, v: np.ndarray, p: PotentialSet) -> np.ndarray:
    n = v.size
    dens, pair, rbar = _bonds(model, v, p)
    g1 = p.G.d1(rbar)
    g2 = p.G.d2(rbar)
    J = np.zeros((n, n))
    H = np.zeros((n, n))
    for w, sh, r in dens:
        T = _shift_matrix(n, sh)
        J += (w * p.rho.d1(r))[:, None] * T
        H += T.T @ ((w * g1 * p.rho.d2(r))[:, None] * T)
    H += J.T @ (g2[:, None] * J)
    for w, sh, r in pair:
        T = _shift_matrix(n, sh)
        H += T.T @ ((w * p.phi.d2(r))[:, None] * T)
    return H


def difference_matrix(cfg: ChainConfig) -> np.ndarray:
    """Matrix of the periodic first difference u -> Du."""
    n = cfg.size
    return (np.eye(n) - np.roll(np.eye(n), 1, axis=0)) / cfg.epsilon


def hessian(model, y: Deformation, p: PotentialSet) -> np.ndarray:
    """Second derivatives d^2 E / dy_l dy_m of the internal energy."""
    model = ModelKind.parse(model)
    Hv = _hessian_wrt_strains(model, y.strains, p)
    D = difference_matrix(y.cfg)
    H = y.cfg.epsilon * (D.T @ Hv @ D)
    return 0.5 * (H + H.T)


def zero_mean_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n x n-1) of the vectors with zero sum.

    Columns 2..n of the Householder reflector that maps e_1 to the
    normalised all-ones vector.
    """
    w = np.ones(n) / np.sqrt(n)
    w[0] -= 1.0
    nw = np.dot(w, w)
    if nw == 0.0:  # n == 1
        return np.zeros((1, 0))
    P = np.eye(n) - 2.0 * np.outer(w, w) / nw
    return P[:, 1:]


def _residual(g: np.ndarray, cfg: ChainConfig) -> float:
    gp = g - g.mean()
    return float(np.sqrt(cfg.epsilon * np.dot(gp, gp)))


def equilibrium_solve(
    model,
    loads: DeadLoads | None,
    y0: Deformation,
    p: PotentialSet,
    tol: float = 1e-10,
    max_iter: int = 50,
    history: list | None = None,
) -> Deformation:
    """Newton iteration for a stable equilibrium with zero-mean displacement.

    Each step solves the Hessian system projected onto the zero-mean
    subspace, so the mean of u never changes.  The residual is the
    l2_eps norm of the projected gradient; its values are appended to
    ``history`` when a list is supplied.

    Raises ``SingularHessian`` when the projected Hessian at an iterate is
    not positive definite, ``NoConvergence`` after ``max_iter`` steps and
    ``DomainViolation`` when a bond leaves the potential domains.
    """
    model = ModelKind.parse(model)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not y0.is_admissible():
        raise ValueError("initial displacement must have zero mean")
    cfg = y0.cfg
    Q = zero_mean_basis(cfg.size)
    y = y0
    for it in range(max_iter + 1):
        g = gradient(model, y, p, loads)
        res = _residual(g, cfg)
        if history is not None:
            history.append(res)
        log.debug("newton iter %d residual %.3e", it, res)
        if res <= tol:
            return y
        if it == max_iter:
            break
        Hq = Q.T @ hessian(model, y, p) @ Q
        try:
            L = np.linalg.cholesky(Hq)
        except np.linalg.LinAlgError:
            raise SingularHessian(
                f"projected Hessian not positive definite at iteration {it}"
            ) from None
        z = np.linalg.solve(L.T, np.linalg.solve(L, -(Q.T @ g)))
        y = Deformation(y.y + Q @ z, cfg)
    raise NoConvergence(f"no convergence in {max_iter} Newton steps (residual {res:.3e})")


def write_values_csv(values: Sequence[float], path: str | Path) -> None:
    """One value per line, lattice order l = -N+1..N."""
    Path(path).write_text("".join(f"{float(x):.17g}\n" for x in values))


def read_values_csv(path: str | Path) -> np.ndarray:
    vals = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            vals.append(float(line.split(",")[0]))
    return np.asarray(vals, dtype=float)
