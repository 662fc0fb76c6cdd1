"""Closed commutator algebra of linear forms in (1, a_j, a_j†).

For a Gaussian model the drift G is at most quadratic in ladder
operators, so commutation with G maps the (2d+1)-dimensional space of
forms c0 + sum_j alpha_j a_j + sum_j beta_j a_j† into itself.  The action
is represented by an explicit (2d+1) x (2d+1) matrix derived from the
CCR:

    [G, a_m]  = (i/2) zeta_m
              + sum_k (i Omega_mk + (V^T conj(V) + U^T conj(U))_mk / 2) a_k
              + sum_k (i kappa_mk + (V^T U + U^T V)_mk / 2) a_k†
    [G, a_m†] = -(i/2) conj(zeta_m)
              + sum_k (-i conj(kappa)_mk - (V†conj(U) + U†conj(V))_mk / 2) a_k
              + sum_k (-i Omega_km - (V†V + U†U)_mk / 2) a_k†

validate_action_oracle cross-checks this closed form against sparse
matrix commutators on the interior block, where truncation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import evolution

GS_DROP_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearForm:
    """The operator c0 + sum_j alpha_j a_j + sum_j beta_j a_j†."""

    c0: complex
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=complex).reshape(-1)
        beta = np.asarray(self.beta, dtype=complex).reshape(-1)
        if alpha.shape != beta.shape:
            raise ValueError("alpha and beta must have equal length")
        if not (np.isfinite(alpha).all() and np.isfinite(beta).all()
                and np.isfinite(complex(self.c0))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def d(self):
        return self.alpha.size

    def coefficients(self):
        """Coefficient vector (c0, alpha_1..alpha_d, beta_1..beta_d)."""
        return np.concatenate([[self.c0], self.alpha, self.beta])

    @classmethod
    def from_coefficients(cls, vec):
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        d = (vec.size - 1) // 2
        return cls(c0=vec[0], alpha=vec[1:1 + d], beta=vec[1 + d:])

    def is_zero(self, tol=1e-14):
        return bool(np.abs(self.coefficients()).max() <= tol)

    def to_matrix(self, ladders):
        """Realize the form as a sparse matrix on a truncated space."""
        D = ladders.space.D
        M = self.c0 * sp.identity(D, dtype=complex, format="csr")
        for j in range(self.d):
            if self.alpha[j] != 0:
                M = M + self.alpha[j] * ladders.a[j]
            if self.beta[j] != 0:
                M = M + self.beta[j] * ladders.adag[j]
        return M.tocsr()


@dataclass(frozen=True, eq=False)
class AdjointActionMatrix:
    """Matrix of form -> [G, form] on (c0, alpha, beta) coefficients."""

    M: np.ndarray
    d: int
    kraus: tuple


def kraus_form(model, ell):
    """LinearForm of the ell-th (0-based) Kraus operator: alpha = conj(V row), beta = U row."""
    if not 0 <= ell < model.m:
        raise IndexError(f"ell must be in [0, {model.m}), got {ell}")
    return LinearForm(c0=0.0, alpha=model.V[ell].conj(), beta=model.U[ell])


def adjoint_action(model):
    """Closed-form matrix of the map form -> [G, form] for a Gaussian model."""
    d = model.d
    V, U = model.V, model.U
    Omega, kappa, zeta = model.Omega, model.kappa, model.zeta
    A = 1j * Omega + 0.5 * (V.T @ V.conj() + U.T @ U.conj())
    B = 1j * kappa + 0.5 * (V.T @ U + U.T @ V)
    C = -1j * kappa.conj() - 0.5 * (V.conj().T @ U.conj() + U.conj().T @ V.conj())
    Dm = -1j * Omega.T - 0.5 * (V.conj().T @ V + U.conj().T @ U)
    M = np.zeros((2 * d + 1, 2 * d + 1), dtype=complex)
    M[0, 1:1 + d] = 0.5j * zeta
    M[0, 1 + d:] = -0.5j * zeta.conj()
    M[1:1 + d, 1:1 + d] = A.T
    M[1:1 + d, 1 + d:] = C.T
    M[1 + d:, 1:1 + d] = B.T
    M[1 + d:, 1 + d:] = Dm.T
    kraus = tuple(kraus_form(model, ell) for ell in range(model.m))
    return AdjointActionMatrix(M=M, d=d, kraus=kraus)


def iterated_commutator(action, ell, order):
    """The order-fold commutator [G, [..., [G, L_ell]]] as a LinearForm.

    order = 0 returns L_ell itself; ell is 0-based.
    """
    if not 0 <= ell < len(action.kraus):
        raise IndexError(f"ell must be in [0, {len(action.kraus)}), got {ell}")
    if order < 0:
        raise ValueError("order must be non-negative")
    vec = action.kraus[ell].coefficients()
    for _ in range(order):
        vec = action.M @ vec
    return LinearForm.from_coefficients(vec)


def validate_action_oracle(model, space, action):
    """Max interior-block deviation between the closed form and matrix commutators.

    For each basis form f in (1, a_j, a_j†), compares the matrix of the
    predicted [G, f] against G F - F G compressed to the interior block.
    """
    from . import generator
    ops = generator.build_operators(model, space)
    lad = ops.ladders
    dim = space.interior_dim()
    d = space.d
    basis_vecs = np.eye(2 * d + 1, dtype=complex)
    worst = 0.0
    for col in range(2 * d + 1):
        f = LinearForm.from_coefficients(basis_vecs[col])
        F = f.to_matrix(lad)
        commutator = (ops.G @ F - F @ ops.G).toarray()
        predicted = LinearForm.from_coefficients(action.M @ basis_vecs[col]).to_matrix(lad).toarray()
        diff = np.abs(commutator[:dim, :dim] - predicted[:dim, :dim])
        if diff.size:
            worst = max(worst, float(diff.max()))
    return worst


def _orthonormalize(columns, candidates, max_norm, drop_rtol=GS_DROP_RTOL):
    """Gram-Schmidt candidates against existing columns; returns added vectors.

    A candidate is kept when its residual norm exceeds drop_rtol times
    the largest vector norm seen so far.
    """
    added = []
    for w in candidates:
        nw = np.linalg.norm(w)
        max_norm = max(max_norm, nw)
        r = w
        for _ in range(2):
            for q in columns + added:
                r = r - np.vdot(q, r) * q
        rn = np.linalg.norm(r)
        if rn > drop_rtol * max(1e-300, max_norm):
            added.append(r / rn)
    return added, max_norm


@dataclass(frozen=True, eq=False)
class SupportSpan:
    """Orthonormal interior basis spanned by commutator words applied to P_t psi."""

    basis: np.ndarray
    rank: int
    rounds_used: int
    word_census: list
    contaminated: bool


def support_span(ops, action, psi, t, max_order=2, max_word=None):
    """Span of {P_t psi} and commutator words applied to it, restricted to the interior.

    Words are products of iterated commutators of G with the Kraus
    operators, each of order <= max_order, enumerated breadth-first by
    word length with exact pruning (a vector already in the span is not
    expanded).  The closure is computed in the full truncated space and
    projected onto the interior at the end.  `contaminated` flags runs
    whose effective word depth exceeds the interior margin, where hard
    truncation may distort the high-grade content.
    """
    space = ops.space
    if t <= 0:
        raise ValueError("t must be positive")
    psi = np.asarray(psi, dtype=complex).reshape(space.D)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be a unit vector")
    if max_word is None:
        max_word = 2 * (space.N_max - space.interior_margin + 1)
    if max_order < 0 or max_word < 0:
        raise ValueError("budgets must be non-negative")

    forms = []
    for ell in range(len(action.kraus)):
        for order in range(max_order + 1):
            f = iterated_commutator(action, ell, order)
            if not f.is_zero():
                forms.append(f.to_matrix(ops.ladders))

    phi = evolution.evolve_vector(ops, psi, [0.0, t], method="expm").states[-1]
    columns = []
    max_norm = 0.0
    added, max_norm = _orthonormalize(columns, [phi], max_norm)
    columns += added
    census = []
    frontier = list(added)
    rounds = 0
    for _ in range(max_word):
        if not frontier:
            break
        candidates = [F @ q for q in frontier for F in forms]
        added, max_norm = _orthonormalize(columns, candidates, max_norm)
        columns += added
        frontier = added
        rounds += 1
        census.append(len(added))
        if not added:
            break

    dim = space.interior_dim()
    projected = [q[:dim] for q in columns]
    interior_cols = []
    max_norm_int = 0.0
    for w in projected:
        added, max_norm_int = _orthonormalize(interior_cols, [w], max_norm_int)
        interior_cols += added
    basis = np.zeros((space.D, len(interior_cols)), dtype=complex)
    for i, q in enumerate(interior_cols):
        basis[:dim, i] = q
    effective_depth = len([c for c in census if c > 0])
    return SupportSpan(
        basis=basis, rank=len(interior_cols), rounds_used=rounds,
        word_census=census,
        contaminated=bool(effective_depth > space.interior_margin),
    )


def kraus_coefficient_matrix(model):
    """The m x 2d matrix stacking (alpha, beta) rows of the Kraus forms.

    Its Gram matrix is the Kossakowski matrix, so for a strictly positive
    Kossakowski matrix with m = 2d it is invertible and the ladder
    operators can be recovered as combinations of the L_l.
    """
    rows = [np.concatenate([model.V[ell].conj(), model.U[ell]])
            for ell in range(model.m)]
    return np.vstack(rows)


def inversion_condition_number(model):
    """Condition number of the Kraus coefficient matrix (inf when singular)."""
    C = kraus_coefficient_matrix(model)
    s = np.linalg.svd(C, compute_uv=False)
    if s.min() == 0.0:
        return float("inf")
    return float(s.max() / s.min())
