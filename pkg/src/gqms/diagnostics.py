"""Sampled certificates for Gaussian generators on truncated spaces.

All spectra, ranks and quadratic forms are evaluated after compression to
the interior subspace so that hard-truncation artifacts at the cutoff are
quarantined.  Random probe vectors have complex-Gaussian coefficients on
the interior block, are normalized, and are deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import evolution
from .commutators import _orthonormalize


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Sampled-inequality outcome: violations = 0 iff min_slack >= -tolerance."""

    samples: int
    min_slack: float
    violations: int
    tolerance: float
    witness: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class DomainComparisonReport:
    """Empirical constants for the graph-norm bounds of N against G0 and G."""

    samples: int
    c0_hat: float | None
    c_hat: float | None
    max_required_c0: float
    max_required_c: float

    @property
    def feasible(self):
        return self.c0_hat is not None and self.c_hat is not None


@dataclass(frozen=True, eq=False)
class SupportReport:
    """Interior eigen-rank of an evolved state at one time."""

    t: float
    rank: int
    min_interior_eig: float
    full: bool
    psi_index: int = 0


@dataclass(frozen=True, eq=False)
class InvariantSubspaceReport:
    """Joint closure dimensions under G and the Kraus operators."""

    seed_count: int
    min_closure_dim: int
    interior_dim: int
    closure_dims: tuple
    reducible_witness: np.ndarray | None = None

    @property
    def full_closure(self):
        return self.min_closure_dim == self.interior_dim


@dataclass(frozen=True, eq=False)
class SectorReport:
    """Numerical-range sector estimate: |Im z| <= tan(theta_hat) (shift - Re z)."""

    theta_hat: float
    shift: float
    per_shift: tuple
    z_samples: np.ndarray


def random_interior_vector(space, rng, margin=None):
    """Normalized complex-Gaussian vector supported on the interior block."""
    dim = space.interior_dim(margin)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v = np.zeros(space.D, dtype=complex)
    v[:dim] = z / np.linalg.norm(z)
    return v


def number_operator_bound(ops, K, n_samples, seed, tol=1e-10):
    """Sample the lower bound <xi, -2 G0 xi> >= eps0 <xi, (2N + d) xi>.

    Valid for a positive semidefinite Kossakowski matrix with smallest
    eigenvalue eps0; slack is recorded per normalized interior sample.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    space = ops.space
    d = space.d
    eps0 = K.eps0
    min_slack = np.inf
    violations = 0
    witness = None
    for _ in range(n_samples):
        xi = random_interior_vector(space, rng)
        lhs = float(np.real(np.vdot(xi, -2.0 * (ops.G0 @ xi))))
        rhs = eps0 * float(np.real(np.vdot(xi, 2.0 * (ops.N @ xi) + d * xi)))
        slack = lhs - rhs
        if slack < min_slack:
            min_slack = slack
            if slack < -tol:
                witness = xi
        if slack < -tol:
            violations += 1
    return BoundReport(
        samples=n_samples, min_slack=float(min_slack), violations=violations,
        tolerance=tol, witness=witness,
    )


def domain_comparison_constants(ops, K, n_samples, seed, c_grid=None):
    """Smallest grid constants c0, c with eps0^2 ||N xi||^2 <= 2 ||G0 xi||^2 + c0
    and eps0^2 ||N xi||^2 <= 2 ||G xi||^2 + c over the sampled interior vectors.

    Existence of finite constants is the quantity of interest; the grid
    search reports the empirical values, None when the grid is exhausted.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if c_grid is None:
        c_grid = [0.0] + [float(2 ** k) for k in range(-2, 11)]
    c_grid = sorted(float(c) for c in c_grid)
    rng = np.random.default_rng(seed)
    eps0 = K.eps0
    req_c0 = -np.inf
    req_c = -np.inf
    for _ in range(n_samples):
        xi = random_interior_vector(ops.space, rng)
        n2 = np.linalg.norm(ops.N @ xi) ** 2
        g02 = np.linalg.norm(ops.G0 @ xi) ** 2
        g2 = np.linalg.norm(ops.G @ xi) ** 2
        req_c0 = max(req_c0, eps0 ** 2 * n2 - 2.0 * g02)
        req_c = max(req_c, eps0 ** 2 * n2 - 2.0 * g2)
    def pick(required):
        for c in c_grid:
            if c >= required:
                return c
        return None
    return DomainComparisonReport(
        samples=n_samples,
        c0_hat=pick(req_c0), c_hat=pick(req_c),
        max_required_c0=float(req_c0), max_required_c=float(req_c),
    )


def positivity_improving_probe(superop, psis, times, space, rank_rtol=1e-8,
                               method="auto"):
    """Evolve pure states and report the interior eigen-rank at each time.

    full is true when the interior block of the evolved state has full
    eigen-rank at the relative threshold, the numerical signature of a
    positivity-improving semigroup at that (psi, t).
    """
    times = sorted(set(float(t) for t in times))
    if any(t < 0 for t in times):
        raise ValueError("times must be non-negative")
    grid = np.array(sorted({0.0} | set(times)))
    dim = space.interior_dim()
    reports = []
    for idx, psi in enumerate(psis):
        rho0 = evolution.DensityMatrix.pure(psi)
        result = evolution.evolve_density(superop, rho0, grid, method=method)
        for t in times:
            i = int(np.searchsorted(grid, t))
            rank, min_eig = evolution.support_rank(
                result.states[i].rho, dim, rtol=rank_rtol)
            reports.append(SupportReport(
                t=t, rank=rank, min_interior_eig=min_eig,
                full=bool(rank == dim), psi_index=idx,
            ))
    return reports


def invariant_subspace_search(ops, n_seeds, seed, starts=None, drop_rtol=1e-10):
    """Grow span{v} under the interior compressions of G and every L_l.

    Stops when the dimension is stable for two consecutive rounds (with a
    hard cap of 4 x dim iterations).  A closure smaller than the interior
    dimension is returned as a reducibility witness basis.
    """
    if n_seeds < 1 and not starts:
        raise ValueError("need n_seeds >= 1 or explicit start vectors")
    space = ops.space
    dim = space.interior_dim()
    mats = [np.asarray(ops.G.toarray())[:dim, :dim]]
    mats += [np.asarray(L.toarray())[:dim, :dim] for L in ops.L]
    rng = np.random.default_rng(seed)
    vectors = []
    for _ in range(max(0, n_seeds)):
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        vectors.append(z / np.linalg.norm(z))
    for v in starts or []:
        v = np.asarray(v, dtype=complex).reshape(space.D)[:dim]
        nv = np.linalg.norm(v)
        if nv == 0:
            raise ValueError("start vector has no interior component")
        vectors.append(v / nv)
    closure_dims = []
    witness = None
    for v in vectors:
        columns = [v]
        frontier = [v]
        stable_rounds = 0
        max_norm = 1.0
        for _ in range(4 * dim):
            candidates = [M @ q for q in frontier for M in mats]
            added, max_norm = _orthonormalize(
                columns, candidates, max_norm, drop_rtol=drop_rtol)
            columns += added
            frontier = added if added else columns
            stable_rounds = stable_rounds + 1 if not added else 0
            if stable_rounds >= 2 or len(columns) == dim:
                break
        closure_dims.append(len(columns))
        if len(columns) < dim and witness is None:
            basis = np.zeros((space.D, len(columns)), dtype=complex)
            for i, q in enumerate(columns):
                basis[:dim, i] = q
            witness = basis
    return InvariantSubspaceReport(
        seed_count=len(vectors),
        min_closure_dim=int(min(closure_dims)),
        interior_dim=dim,
        closure_dims=tuple(closure_dims),
        reducible_witness=witness,
    )


def sector_estimate(ops, n_samples, seed, shift_grid=None):
    """Heuristic sector half-angle of the numerical range of G.

    Samples z = <xi, G xi> over normalized interior vectors and, for each
    shift w in the grid, finds the smallest theta with
    |Im z| <= tan(theta) (w - Re z) for every sample; reports the best
    (theta_hat, shift).  A necessary-style indication of sectoriality,
    not a proof of analyticity.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if shift_grid is None:
        shift_grid = [0.0, 0.5, 1.0, 2.0]
    rng = np.random.default_rng(seed)
    zs = np.empty(n_samples, dtype=complex)
    for i in range(n_samples):
        xi = random_interior_vector(ops.space, rng)
        zs[i] = np.vdot(xi, ops.G @ xi)
    per_shift = []
    for w in shift_grid:
        angles = np.arctan2(np.abs(zs.imag), float(w) - zs.real)
        per_shift.append((float(w), float(angles.max())))
    best_shift, best_theta = min(per_shift, key=lambda p: p[1])
    return SectorReport(
        theta_hat=best_theta, shift=best_shift,
        per_shift=tuple(per_shift), z_samples=zs,
    )


def minimal_kossakowski_eig(K, herm_tol=1e-10):
    """Smallest eigenvalue of a Hermitian matrix (Kossakowski or otherwise)."""
    K = np.asarray(K, dtype=complex)
    if np.abs(K - K.conj().T).max() > herm_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return float(np.linalg.eigvalsh(0.5 * (K + K.conj().T)).min())
