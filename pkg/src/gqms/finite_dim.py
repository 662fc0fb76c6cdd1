"""Finite-dimensional GKLS generators over a traceless orthonormal basis.

The generator is specified by a Hamiltonian H and a Hermitian positive
semidefinite Kossakowski matrix c over basis matrices F_k with
tr(F_k) = 0 and tr(F_k F_j†) = delta_kj:

    Heisenberg:   L(x)    =  i[H, x] + sum_kj c_kj (F_j† x F_k - {F_j†F_k, x}/2)
    Schrodinger:  L*(rho) = -i[H, rho] + sum_kj c_kj (F_k rho F_j† - {F_j†F_k, rho}/2)

A strictly positive c makes the semigroup positivity improving; the probe
and derivative checks below sample that behaviour on the unit sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import serialize
from .generator import Superoperator

MAX_DIM = 6
ORTHONORMALITY_TOL = 1e-12
PSD_TOL = 1e-10


def gellmann_basis(n):
    """Generalized Gell-Mann matrices normalized to tr(F_j F_k†) = delta_jk.

    Ordering: symmetric pair matrices (j < k lexicographic), antisymmetric
    pair matrices, then the n-1 diagonal matrices.  For n = 2 this is
    (sigma_x, sigma_y, sigma_z) / sqrt(2).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / np.sqrt(2.0)
            mats.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = -1j / np.sqrt(2.0)
            m[k, j] = 1j / np.sqrt(2.0)
            mats.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag).astype(complex) / np.sqrt(l * (l + 1)))
    return mats


@dataclass(frozen=True, eq=False)
class FiniteGKLSModel:
    """Hilbert dimension n, Hamiltonian H, basis F and Kossakowski matrix c."""

    n: int
    H: np.ndarray
    c: np.ndarray
    F: list = field(default=None)

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise ValueError("need n >= 2")
        if n > MAX_DIM:
            raise ValueError(f"n = {n} exceeds the superoperator size guard {MAX_DIM}")
        H = np.asarray(self.H, dtype=complex)
        c = np.asarray(self.c, dtype=complex)
        F = self.F if self.F is not None else gellmann_basis(n)
        F = [np.asarray(f, dtype=complex) for f in F]
        k = n * n - 1
        if H.shape != (n, n):
            raise ValueError("H must be n x n")
        if np.abs(H - H.conj().T).max() > ORTHONORMALITY_TOL:
            raise ValueError("H must be Hermitian")
        if len(F) != k or any(f.shape != (n, n) for f in F):
            raise ValueError(f"F must hold {k} matrices of shape ({n}, {n})")
        for i, f in enumerate(F):
            if abs(np.trace(f)) > ORTHONORMALITY_TOL:
                raise ValueError(f"F[{i}] is not traceless")
            for j in range(i + 1):
                g = np.trace(F[j] @ f.conj().T)
                target = 1.0 if i == j else 0.0
                if abs(g - target) > ORTHONORMALITY_TOL:
                    raise ValueError(f"F[{j}], F[{i}] not orthonormal: tr = {g}")
        if c.shape != (k, k):
            raise ValueError(f"c must be {k} x {k}")
        if np.abs(c - c.conj().T).max() > ORTHONORMALITY_TOL:
            raise ValueError("c must be Hermitian")
        if np.linalg.eigvalsh(0.5 * (c + c.conj().T)).min() < -PSD_TOL:
            raise ValueError("c must be positive semidefinite")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "F", F)


def build_fd_generators(model):
    """Dense vectorized generators (heisenberg, schrodinger) of the model."""
    n = model.n
    I = np.eye(n, dtype=complex)
    comm = np.kron(I, model.H) - np.kron(model.H.T, I)
    heis = 1j * comm
    schr = -1j * comm
    for k, Fk in enumerate(model.F):
        for j, Fj in enumerate(model.F):
            ckj = model.c[k, j]
            if ckj == 0:
                continue
            Fjd = Fj.conj().T
            FjdFk = Fjd @ Fk
            anti = 0.5 * (np.kron(I, FjdFk) + np.kron(FjdFk.T, I))
            heis += ckj * (np.kron(Fk.T, Fjd) - anti)
            schr += ckj * (np.kron(Fjd.T, Fk) - anti)
    return (
        Superoperator(matrix=sp.csr_matrix(heis), picture="heisenberg", dim=n),
        Superoperator(matrix=sp.csr_matrix(schr), picture="schrodinger", dim=n),
    )


def _heisenberg_expectation(model, T, u, v):
    """<v, T(|u><u|) v> for a dense Heisenberg propagator T."""
    n = model.n
    x = np.outer(u, u.conj()).reshape(n * n, order="F")
    evolved = (T @ x).reshape(n, n, order="F")
    return float(np.real(np.vdot(v, evolved @ v)))


def initial_derivative(model, u, v, h=1e-4):
    """Initial growth rate of t -> <v, T_t(|u><u|) v> for orthogonal unit u, v.

    Returns (analytic, numeric): the closed form
    sum_kj c_kj <F_j v, u><u, F_k v> and a second-order one-sided finite
    difference of the semigroup expectation at t = 0+ (the |<v, P_t* u>|^2
    contribution is second order for orthogonal pairs).
    """
    u = np.asarray(u, dtype=complex).reshape(model.n)
    v = np.asarray(v, dtype=complex).reshape(model.n)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10 or abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("u and v must be unit vectors")
    if abs(np.vdot(u, v)) > 1e-10:
        raise ValueError("u and v must be orthogonal")
    z = np.array([np.vdot(Fj @ v, u) for Fj in model.F])
    analytic = float(np.real(np.einsum("k,kj,j->", z.conj(), model.c, z)))
    heis, _ = build_fd_generators(model)
    dense = heis.matrix.toarray()
    f_h = _heisenberg_expectation(model, scipy.linalg.expm(dense * h), u, v)
    f_2h = _heisenberg_expectation(model, scipy.linalg.expm(dense * 2 * h), u, v)
    numeric = (4.0 * f_h - f_2h) / (2.0 * h)
    return analytic, numeric


def _random_unit(rng, n):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def fd_positivity_probe(model, t_grid, n_pairs, seed):
    """Minimum of <v, T_t(|u><u|) v> over sampled unit pairs and times.

    A strictly positive minimum across the grid is the sampled signature
    of a positivity-improving semigroup.
    """
    t_grid = [float(t) for t in t_grid]
    if any(t <= 0 for t in t_grid):
        raise ValueError("t_grid entries must be positive")
    rng = np.random.default_rng(seed)
    pairs = [(_random_unit(rng, model.n), _random_unit(rng, model.n))
             for _ in range(n_pairs)]
    heis, _ = build_fd_generators(model)
    dense = heis.matrix.toarray()
    minimum = np.inf
    for t in t_grid:
        T = scipy.linalg.expm(dense * t)
        for u, v in pairs:
            minimum = min(minimum, _heisenberg_expectation(model, T, u, v))
    return float(minimum)


def fd_model_from_jsonable(obj):
    """Decode {"n": int, "H": [[..]], "c": [[..]], "basis": "gellmann"}."""
    n = int(obj["n"])
    basis = obj.get("basis", "gellmann")
    if basis != "gellmann":
        raise ValueError(f"unknown basis {basis!r}")
    H = serialize.pairs_to_matrix(obj["H"]) if "H" in obj else np.zeros((n, n))
    c = serialize.pairs_to_matrix(obj["c"])
    return FiniteGKLSModel(n=n, H=H, c=c)
