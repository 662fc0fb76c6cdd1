"""Truncated bosonic Fock spaces with a total-excitation cutoff.

The d-mode Fock space is truncated to occupation multi-indices
n = (n_1, ..., n_d) with |n| = n_1 + ... + n_d <= N_max.  The basis is
ordered by grade |n| first and lexicographically within each grade, so
grade blocks are contiguous and at-most-quadratic operators are block
banded (they connect grades differing by at most 2).

Creation rows that would leave the cutoff are set to zero (hard
truncation).  Operator identities such as the CCR therefore hold exactly
only after compression to the *interior* subspace spanned by basis
vectors with |n| <= N_max - interior_margin; the default margin of 2
covers every quadratic operator built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

DEFAULT_DIMENSION_CAP = 5000


class DimensionCapError(ValueError):
    """The requested truncation exceeds the configured dimension cap."""


class EmptyInteriorError(ValueError):
    """interior_margin exceeds N_max, leaving no interior subspace."""


class BoundaryContaminationError(ValueError):
    """A vector required to be interior-supported has boundary weight."""


def _compositions(total, parts):
    """Yield tuples of `parts` non-negative ints summing to `total`, in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class TruncatedFockSpace:
    """Graded-lexicographic basis of occupation multi-indices with |n| <= N_max."""

    d: int
    N_max: int
    basis: tuple
    index_of: dict
    interior_margin: int = 2

    @property
    def D(self):
        return len(self.basis)

    @property
    def grades(self):
        """Integer array of total excitation |n| per basis index."""
        return np.array([sum(n) for n in self.basis], dtype=int)

    def interior_dim(self, margin=None):
        """Dimension of the span of basis vectors with |n| <= N_max - margin."""
        margin = self.interior_margin if margin is None else margin
        if margin > self.N_max:
            raise EmptyInteriorError(
                f"interior_margin={margin} exceeds N_max={self.N_max}"
            )
        cut = self.N_max - margin
        return sum(1 for n in self.basis if sum(n) <= cut)

    def basis_vector(self, n):
        """Unit coordinate vector for the occupation tuple n."""
        n = tuple(int(k) for k in n)
        if n not in self.index_of:
            raise ValueError(f"occupation {n} not in the truncated basis")
        e = np.zeros(self.D, dtype=complex)
        e[self.index_of[n]] = 1.0
        return e

    def vacuum(self):
        return self.basis_vector((0,) * self.d)


@dataclass(frozen=True, eq=False)
class LadderOperators:
    """Sparse annihilation, creation and number operators on a truncated space."""

    space: TruncatedFockSpace
    a: tuple
    adag: tuple
    N: sp.spmatrix


def build_space(d, N_max, interior_margin=2, dimension_cap=DEFAULT_DIMENSION_CAP):
    """Enumerate the truncated d-mode Fock basis with total excitation <= N_max.

    The dimension is binomial(N_max + d, d); requests above `dimension_cap`
    are rejected as a resource guard.
    """
    if d < 1 or N_max < 1:
        raise ValueError(f"need d >= 1 and N_max >= 1, got d={d}, N_max={N_max}")
    if interior_margin < 0:
        raise ValueError("interior_margin must be non-negative")
    D = math.comb(N_max + d, d)
    if D > dimension_cap:
        raise DimensionCapError(
            f"dimension {D} for (d={d}, N_max={N_max}) exceeds cap {dimension_cap}"
        )
    basis = []
    for grade in range(N_max + 1):
        basis.extend(_compositions(grade, d))
    basis = tuple(basis)
    index_of = {n: i for i, n in enumerate(basis)}
    return TruncatedFockSpace(
        d=d, N_max=N_max, basis=basis, index_of=index_of,
        interior_margin=interior_margin,
    )


def build_ladders(space):
    """Build sparse matrices for a_j, a_j† and the total number operator.

    a_j e(n) = sqrt(n_j) e(n - delta_j); a_j† e(n) = sqrt(n_j + 1) e(n + delta_j)
    when the target stays under the cutoff, zero otherwise (hard truncation).
    """
    D = space.D
    a_ops = []
    adag_ops = []
    for j in range(space.d):
        rows_a, cols_a, vals_a = [], [], []
        rows_c, cols_c, vals_c = [], [], []
        for i, n in enumerate(space.basis):
            if n[j] > 0:
                lower = n[:j] + (n[j] - 1,) + n[j + 1:]
                rows_a.append(space.index_of[lower])
                cols_a.append(i)
                vals_a.append(math.sqrt(n[j]))
            if sum(n) + 1 <= space.N_max:
                upper = n[:j] + (n[j] + 1,) + n[j + 1:]
                rows_c.append(space.index_of[upper])
                cols_c.append(i)
                vals_c.append(math.sqrt(n[j] + 1))
        a_ops.append(sp.csr_matrix(
            (np.asarray(vals_a, dtype=complex), (rows_a, cols_a)), shape=(D, D)))
        adag_ops.append(sp.csr_matrix(
            (np.asarray(vals_c, dtype=complex), (rows_c, cols_c)), shape=(D, D)))
    N = sp.diags(space.grades.astype(complex), format="csr")
    return LadderOperators(space=space, a=tuple(a_ops), adag=tuple(adag_ops), N=N)


def coherent_vector(space, g):
    """Truncated (unnormalized) coherent vector with amplitudes g.

    Component at n is prod_j g_j^{n_j} / sqrt(n_j!) for |n| <= N_max.
    """
    g = np.asarray(g, dtype=complex).reshape(space.d)
    v = np.zeros(space.D, dtype=complex)
    for i, n in enumerate(space.basis):
        num = 1.0 + 0.0j
        fact = 1.0
        for j in range(space.d):
            num *= g[j] ** n[j]
            fact *= math.factorial(n[j])
        v[i] = num / math.sqrt(fact)
    return v


def interior_projector(space, margin=None):
    """Orthogonal projection onto span{e(n) : |n| <= N_max - margin}."""
    margin = space.interior_margin if margin is None else margin
    if margin > space.N_max:
        raise EmptyInteriorError(
            f"interior_margin={margin} exceeds N_max={space.N_max}"
        )
    cut = space.N_max - margin
    diag = np.array([1.0 if sum(n) <= cut else 0.0 for n in space.basis])
    return sp.diags(diag.astype(complex), format="csr")


def check_interior(space, v, margin=None, tol=1e-12):
    """Raise BoundaryContaminationError unless v is supported on the interior."""
    margin = space.interior_margin if margin is None else margin
    dim = space.interior_dim(margin)
    v = np.asarray(v).reshape(space.D)
    boundary = np.linalg.norm(v[dim:])
    if boundary > tol * max(1.0, np.linalg.norm(v)):
        raise BoundaryContaminationError(
            f"vector has boundary weight {boundary:.3e} outside grade "
            f"{space.N_max - margin}"
        )
    return v
