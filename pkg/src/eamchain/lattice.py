"""Periodic chain geometry, difference operators and Fourier modes.

Arrays of length 2N are stored in the order l = -N+1, ..., N, so storage
index ``i`` corresponds to lattice index ``l = i - N + 1``.  All wraparound
is periodic with period 2N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChainConfig:
    """Periodic chain with ``2N`` atoms per period and spacing ``1/N``."""

    N: int
    F: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not (np.isfinite(self.F) and self.F > 0):
            raise ValueError(f"F must be positive, got {self.F!r}")

    @property
    def epsilon(self) -> float:
        return 1.0 / self.N

    @property
    def size(self) -> int:
        return 2 * self.N

    def indices(self) -> np.ndarray:
        """Lattice indices l = -N+1..N in storage order."""
        return np.arange(-self.N + 1, self.N + 1)

    def uniform(self) -> np.ndarray:
        """Positions of the uniformly strained chain, (y_F)_l = F eps l."""
        return self.F * self.epsilon * self.indices()

    def with_strain(self, F: float) -> "ChainConfig":
        return ChainConfig(self.N, F)


def _as_periodic(u, cfg: ChainConfig) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (cfg.size,):
        raise ValueError(f"expected {cfg.size} values, got shape {u.shape}")
    return u


def diff(u, order: int, cfg: ChainConfig) -> np.ndarray:
    """Backward difference (u_l - u_{l-1}) / eps applied ``order`` times."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order!r}")
    v = _as_periodic(u, cfg)
    for _ in range(order):
        v = (v - np.roll(v, 1)) / cfg.epsilon
    return v


def norm_l2eps(v, cfg: ChainConfig) -> float:
    v = _as_periodic(v, cfg)
    return float(np.sqrt(cfg.epsilon * np.dot(v, v)))


def fourier_modes(N: int) -> np.ndarray:
    """Symbols s_k = 4 sin^2(k pi / 2N) for k = 1..N."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    k = np.arange(1, N + 1)
    s = 4.0 * np.sin(k * np.pi / (2 * N)) ** 2
    s[-1] = 4.0
    return s


def mode_displacement(k: int, N: int) -> np.ndarray:
    """Zero-mean displacement whose first difference is a cosine of wavenumber k.

    The difference satisfies Du_l = a cos(k pi l / N) with ``a`` chosen so
    that ||Du|| = 1.  For k = N this is the alternating mode
    u_l = (-1)^l eps / (2 sqrt 2).
    """
    if int(k) != k or not 1 <= k <= N:
        raise ValueError(f"k must satisfy 1 <= k <= N={N}, got {k!r}")
    cfg = ChainConfig(N)
    ell = cfg.indices()
    theta = k * np.pi / N
    amp = 1.0 / np.sqrt(2.0) if k == N else 1.0
    if k == N:
        return amp * cfg.epsilon * (-1.0) ** ell / 2.0
    u = amp * cfg.epsilon * np.sin(theta * (ell + 0.5)) / (2.0 * np.sin(theta / 2))
    return u - u.mean()


def fourier_coefficients(v, cfg: ChainConfig) -> np.ndarray:
    """Coefficients c_k, k = -N+1..N, of v_l = sum_k c_k / sqrt(2) exp(i k pi l / N).

    With this normalisation eps * sum |v_l|^2 == sum |c_k|^2.
    """
    v = _as_periodic(v, cfg)
    ell = cfg.indices()
    k = cfg.indices()
    phase = np.exp(-1j * np.pi * np.outer(k, ell) / cfg.N)
    return cfg.epsilon / np.sqrt(2.0) * (phase @ v)


def is_zero_mean(u, tol: float = 1e-12) -> bool:
    u = np.asarray(u, dtype=float)
    scale = max(np.abs(u).max(initial=0.0), 1.0e-300)
    return bool(abs(u.sum()) <= tol * scale)
