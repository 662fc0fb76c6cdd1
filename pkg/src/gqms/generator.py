"""Truncated operators and Lindblad superoperators of a Gaussian model.

Assembles sparse matrices for H, the Kraus operators L_l, the drift
G = -iH - (1/2) sum_l L_l† L_l and its dissipative part G0 on a truncated
Fock space, together with the vectorized generator in either picture:

    Schrodinger:  rho -> -i[H, rho] + sum_l (L_l rho L_l† - {L_l†L_l, rho}/2)
    Heisenberg:   x   ->  i[H, x]   + sum_l (L_l† x L_l - {L_l†L_l, x}/2)

Vectorization is by column stacking, vec(A X B) = (B^T kron A) vec(X).
Sparse entries are kept exactly as assembled (no drop thresholding).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import fock

PICTURES = ("schrodinger", "heisenberg")


@dataclass(frozen=True, eq=False)
class TruncatedOperators:
    """Sparse H, G, G0, N and Kraus list L on a truncated Fock space."""

    space: fock.TruncatedFockSpace
    ladders: fock.LadderOperators
    H: sp.spmatrix
    G: sp.spmatrix
    G0: sp.spmatrix
    N: sp.spmatrix
    L: tuple
    model: object


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Vectorized generator acting on column-stacked D x D matrices."""

    matrix: sp.spmatrix
    picture: str
    dim: int


def build_operators(model, space):
    """Assemble H, L_l, G0 = -(1/2) sum L_l†L_l and G = -iH + G0.

    The Kraus sum runs over all m rows of (V, U).  On the truncated space
    H is exactly Hermitian and G0 exactly negative semidefinite; identities
    involving products of quadratic operators hold on the interior subspace.
    """
    if model.d != space.d:
        raise ValueError(f"model has d={model.d}, space has d={space.d}")
    lad = fock.build_ladders(space)
    d = model.d
    D = space.D
    H = sp.csr_matrix((D, D), dtype=complex)
    for j in range(d):
        for k in range(d):
            if model.Omega[j, k] != 0:
                H = H + model.Omega[j, k] * (lad.adag[j] @ lad.a[k])
            if model.kappa[j, k] != 0:
                H = H + 0.5 * model.kappa[j, k] * (lad.adag[j] @ lad.adag[k])
                H = H + 0.5 * np.conj(model.kappa[j, k]) * (lad.a[j] @ lad.a[k])
    for j in range(d):
        if model.zeta[j] != 0:
            H = H + 0.5 * model.zeta[j] * lad.adag[j]
            H = H + 0.5 * np.conj(model.zeta[j]) * lad.a[j]
    L = []
    for ell in range(model.m):
        Lop = sp.csr_matrix((D, D), dtype=complex)
        for k in range(d):
            if model.V[ell, k] != 0:
                Lop = Lop + np.conj(model.V[ell, k]) * lad.a[k]
            if model.U[ell, k] != 0:
                Lop = Lop + model.U[ell, k] * lad.adag[k]
        L.append(Lop.tocsr())
    G0 = sp.csr_matrix((D, D), dtype=complex)
    for Lop in L:
        G0 = G0 - 0.5 * (Lop.conj().T @ Lop)
    G = (-1j) * H + G0
    return TruncatedOperators(
        space=space, ladders=lad, H=H.tocsr(), G=G.tocsr(), G0=G0.tocsr(),
        N=lad.N, L=tuple(L), model=model,
    )


def build_lindbladian(ops, picture="schrodinger"):
    """Vectorized Lindblad generator in the requested picture.

    The Schrodinger form is exactly trace preserving and the Heisenberg
    form exactly unital at the matrix level; truncation error enters only
    through the operators themselves.
    """
    if picture not in PICTURES:
        raise ValueError(f"picture must be one of {PICTURES}")
    D = ops.space.D
    I = sp.identity(D, dtype=complex, format="csr")
    H = ops.H
    comm = sp.kron(I, H, format="csr") - sp.kron(H.T, I, format="csr")
    M = (1j if picture == "heisenberg" else -1j) * comm
    for Lop in ops.L:
        Ld = Lop.conj().T.tocsr()
        LdL = (Ld @ Lop).tocsr()
        if picture == "schrodinger":
            M = M + sp.kron(Lop.conj(), Lop, format="csr")
        else:
            M = M + sp.kron(Lop.T, Ld, format="csr")
        M = M - 0.5 * sp.kron(I, LdL, format="csr")
        M = M - 0.5 * sp.kron(LdL.T, I, format="csr")
    return Superoperator(matrix=M.tocsr(), picture=picture, dim=D)


def apply_superoperator(superop, X):
    """Apply a vectorized generator to a D x D matrix, returning a matrix."""
    D = superop.dim
    v = superop.matrix @ np.asarray(X, dtype=complex).reshape(D * D, order="F")
    return v.reshape(D, D, order="F")


def quadratic_form_apply(ops, x, v, u):
    """Sesquilinear form of the Heisenberg generator at (v, u), both interior.

    Returns i<Hv, xu> - i<v, xHu>
            - (1/2) sum_l (<v, x L†L u> - 2 <Lv, x Lu> + <L†L v, x u>),
    which agrees with <v, L(x) u> computed from the vectorized generator.
    """
    v = fock.check_interior(ops.space, v)
    u = fock.check_interior(ops.space, u)
    x = np.asarray(x, dtype=complex)
    Hv = ops.H @ v
    Hu = ops.H @ u
    total = 1j * np.vdot(Hv, x @ u) - 1j * np.vdot(v, x @ Hu)
    for Lop in ops.L:
        Lu = Lop @ u
        Lv = Lop @ v
        LdLu = Lop.conj().T @ Lu
        LdLv = Lop.conj().T @ Lv
        total -= 0.5 * (np.vdot(v, x @ LdLu) - 2.0 * np.vdot(Lv, x @ Lu)
                        + np.vdot(LdLv, x @ u))
    return complex(total)


def dissipation_quadratic_identity(ops, K, xi):
    """Evaluate <xi, -2 G0 xi> and the Kossakowski quadratic form on a# xi.

    a# xi stacks (a_1 xi, ..., a_d xi, a_1† xi, ..., a_d† xi); the two
    numbers agree up to rounding for interior xi, where the truncated
    ladder actions are exact.
    """
    xi = fock.check_interior(ops.space, xi)
    lhs = float(np.real(np.vdot(xi, -2.0 * (ops.G0 @ xi))))
    d = ops.space.d
    stack = [ops.ladders.a[j] @ xi for j in range(d)]
    stack += [ops.ladders.adag[j] @ xi for j in range(d)]
    Km = K.matrix if hasattr(K, "matrix") else np.asarray(K, dtype=complex)
    rhs = 0.0 + 0.0j
    for p in range(2 * d):
        for q in range(2 * d):
            if Km[p, q] != 0:
                rhs += Km[p, q] * np.vdot(stack[p], stack[q])
    return lhs, float(np.real(rhs))


def write_triplets(matrix, path):
    """Write a sparse matrix as text lines `row col re im`."""
    coo = sp.coo_matrix(matrix)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# shape {coo.shape[0]} {coo.shape[1]}\n")
        for r, c, val in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {val.real:.17g} {val.imag:.17g}\n")


def read_triplets(path):
    """Read a matrix written by write_triplets."""
    rows, cols, vals = [], [], []
    shape = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line.split()
                shape = (int(parts[2]), int(parts[3]))
                continue
            r, c, re_part, im_part = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(complex(float(re_part), float(im_part)))
    if shape is None:
        raise ValueError(f"{path} has no shape header")
    return sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=shape)
