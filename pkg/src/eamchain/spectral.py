"""Dense-matrix oracle for the analytic eigenvalue formulas.

The Hessian at the uniform state is compared with the Gram matrix of
u -> ||Du||^2 on the zero-mean subspace.  The generalized problem is
reduced to a standard one with an in-house Cholesky factorisation and
solved by a cyclic Jacobi iteration, so the check never relies on the
linear-algebra routines it is meant to cross-examine.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .energetics import Deformation, ModelKind, difference_matrix, hessian, zero_mean_basis
from .errors import JacobiNoConvergence
from .lattice import ChainConfig, fourier_modes
from .potentials import PotentialSet
from .stability import coefficients, lambda_atomistic, lambda_recon

MAX_SWEEPS = 50


def gram_du(cfg: ChainConfig) -> np.ndarray:
    """Matrix M with u^T M u = eps * sum_l ((u_l - u_{l-1}) / eps)^2."""
    D = difference_matrix(cfg)
    M = cfg.epsilon * (D.T @ D)
    return 0.5 * (M + M.T)


def cholesky(M: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = M for symmetric positive definite M."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    L = np.zeros_like(M)
    for j in range(n):
        d = M[j, j] - np.dot(L[j, :j], L[j, :j])
        if not d > 0:
            raise np.linalg.LinAlgError(f"matrix not positive definite at pivot {j}")
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (M[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def lower_inverse(L: np.ndarray) -> np.ndarray:
    """Inverse of a lower-triangular matrix by forward substitution."""
    n = L.shape[0]
    X = np.zeros_like(L)
    eye = np.eye(n)
    for i in range(n):
        X[i] = (eye[i] - L[i, :i] @ X[:i]) / L[i, i]
    return X


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for one cyclic sweep; every index pair meets exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        keep = (p < n) & (q < n)
        p, q = p[keep], q[keep]
        lo, hi = np.minimum(p, q), np.maximum(p, q)
        rounds.append((lo, hi))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(A: np.ndarray, vectors: bool = False, tol: float | None = None):
    """Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi rotations.

    Rotations within one round of the round-robin ordering touch disjoint
    index pairs and are applied together.  Iteration stops when the
    off-diagonal Frobenius norm falls below ``tol * ||A||_F``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    A = 0.5 * (A + A.T)
    V = np.eye(n) if vectors else None
    if n <= 1:
        w = np.diag(A).copy()
        return (w, V) if vectors else w

    if tol is None:
        tol = 4.0 * n * np.finfo(float).eps
    scale = np.linalg.norm(A)
    rounds = _round_robin(n)

    offdiag = ~np.eye(n, dtype=bool)
    tiny = np.finfo(float).tiny * 1e3

    def off(X):
        return np.sqrt(np.sum(X[offdiag] ** 2))

    for sweep in range(MAX_SWEEPS + 1):
        if off(A) <= tol * scale or scale == 0.0:
            break
        if sweep == MAX_SWEEPS:
            raise JacobiNoConvergence(f"off-diagonal norm {off(A):.3e} after {MAX_SWEEPS} sweeps")
        for p, q in rounds:
            apq = A[p, q]
            app = A[p, p]
            aqq = A[q, q]
            # rotations whose angle is below roundoff are skipped
            nz = np.abs(apq) > tiny
            safe = np.where(nz, apq, 1.0)
            with np.errstate(over="ignore"):
                tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(nz & np.isfinite(tau), t, 0.0)
            cs = 1.0 / np.sqrt(1.0 + t * t)
            sn = t * cs
            # A <- J^T A J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-s.  The column
            # pass is a row pass on the transpose, which keeps memory access contiguous.
            for _ in range(2):
                Ap, Aq = A[p, :], A[q, :]
                A[p, :], A[q, :] = cs[:, None] * Ap - sn[:, None] * Aq, sn[:, None] * Ap + cs[:, None] * Aq
                A = np.ascontiguousarray(A.T)
            A[p, q] = 0.0
            A[q, p] = 0.0
            if vectors:
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = Vp * cs - Vq * sn
                V[:, q] = Vp * sn + Vq * cs

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], V[:, order]
    return w[order]


def sym_eigen(H: np.ndarray, M: np.ndarray, vectors: bool = False, basis: np.ndarray | None = None):
    """Generalized eigenpairs of (H, M) restricted to the zero-mean subspace.

    ``basis`` defaults to an orthonormal basis of vectors with zero sum.
    Returned eigenvectors live in the full space and are M-orthonormal.
    """
    H = np.asarray(H, dtype=float)
    M = np.asarray(M, dtype=float)
    for name, X in (("H", H), ("M", M)):
        if np.abs(X - X.T).max(initial=0.0) > 1e-10 * max(np.abs(X).max(initial=0.0), 1.0):
            raise ValueError(f"{name} is not symmetric")
    Q = zero_mean_basis(H.shape[0]) if basis is None else basis
    Hq = Q.T @ H @ Q
    Mq = Q.T @ M @ Q
    L = cholesky(0.5 * (Mq + Mq.T))
    Li = lower_inverse(L)
    K = Li @ Hq @ Li.T
    if not vectors:
        return jacobi_eigh(K)
    w, Z = jacobi_eigh(K, vectors=True)
    return w, Q @ (Li.T @ Z)


def analytic_spectrum(model, p: PotentialSet, F: float, N: int):
    """Eigenvalues lambda(s_k) with multiplicities: k < N twice, k = N once.

    Returns (k, s_k, lambda) arrays of length 2N - 1, unsorted.
    """
    model = ModelKind.parse(model)
    c = coefficients(p, F)
    s = fourier_modes(N)
    if model is ModelKind.ATOMISTIC:
        lam = np.atleast_1d(lambda_atomistic(c, s))
    elif model is ModelKind.RECONSTRUCTION:
        lam = np.atleast_1d(lambda_recon(c, s))
    else:
        lam = np.full(N, c.A)
    k = np.arange(1, N + 1)
    mult = np.where(k < N, 2, 1)
    return np.repeat(k, mult), np.repeat(s, mult), np.repeat(lam, mult)


@dataclass
class SpectrumReport:
    model: ModelKind
    F: float
    N: int
    k: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    analytic: np.ndarray = field(repr=False)
    numeric: np.ndarray = field(repr=False)
    max_abs_mismatch: float = 0.0

    @property
    def dimension(self) -> int:
        return 2 * self.N - 1

    @property
    def multiplicity_ok(self) -> bool:
        counts = np.bincount(self.k, minlength=self.N + 1)[1:]
        expected = np.where(np.arange(1, self.N + 1) < self.N, 2, 1)
        return (
            self.numeric.size == self.analytic.size == self.dimension
            and bool(np.array_equal(counts, expected))
        )

    def as_dict(self) -> dict:
        return {
            "model": self.model.value,
            "F": float(self.F),
            "N": int(self.N),
            "analytic": [float(x) for x in self.analytic],
            "numeric": [float(x) for x in self.numeric],
            "max_abs_mismatch": float(self.max_abs_mismatch),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "s_k", "analytic", "numeric"])
        for row in zip(self.k, self.s, self.analytic, self.numeric):
            w.writerow([int(row[0])] + [f"{float(x):.17g}" for x in row[1:]])
        return buf.getvalue()


def verify_diagonalization(model, p: PotentialSet, F: float, N: int) -> SpectrumReport:
    """Solve the (Hessian, Gram) pencil at y_F and pair it with lambda(s_k)."""
    model = ModelKind.parse(model)
    cfg = ChainConfig(N, F)
    H = hessian(model, Deformation.uniform(cfg), p)
    numeric = sym_eigen(H, gram_du(cfg))
    k, s, lam = analytic_spectrum(model, p, F, N)
    order = np.argsort(lam, kind="stable")
    k, s, lam = k[order], s[order], lam[order]
    mismatch = float(np.abs(numeric - lam).max()) if lam.size else 0.0
    return SpectrumReport(model, float(F), int(N), k, s, lam, numeric, mismatch)
