"""Gaussian model data and the associated Kossakowski matrix.

A Gaussian generator on d modes is specified by
    H   = sum_jk Omega_jk a_j† a_k + (kappa_jk/2) a_j† a_k†
          + (conj(kappa_jk)/2) a_j a_k
          + sum_j (zeta_j/2) a_j† + (conj(zeta_j)/2) a_j,
    L_l = sum_k conj(v_lk) a_k + u_lk a_k†,    l = 1..m,
with Omega Hermitian, kappa symmetric, and V = (v_lk), U = (u_lk) the
m x d coefficient matrices of the Kraus operators.

The Kossakowski matrix is the 2d x 2d positive semidefinite block matrix

    K = [[V^T conj(V), V^T U ],
         [U† conj(V),  U† U  ]]  =  B B†,   B = [[V^T], [U†]],

whose smallest eigenvalue eps0 controls the irreducibility and
positivity-improvement diagnostics implemented elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import serialize

HERMITICITY_TOL = 1e-12
POSITIVITY_TOL = 1e-10
RANK_RTOL = 1e-10
BOGOLIUBOV_TOL = 1e-10
UNITARITY_TOL = 1e-10


def _as_matrix(x, name):
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class GaussianModel:
    """Matrix data (Omega, kappa, zeta, V, U) of a Gaussian generator."""

    d: int
    Omega: np.ndarray
    kappa: np.ndarray
    zeta: np.ndarray
    V: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        d = self.d
        Omega = _as_matrix(self.Omega, "Omega")
        kappa = _as_matrix(self.kappa, "kappa")
        zeta = np.asarray(self.zeta, dtype=complex).reshape(-1)
        V = _as_matrix(self.V, "V")
        U = _as_matrix(self.U, "U")
        if Omega.shape != (d, d) or kappa.shape != (d, d) or zeta.shape != (d,):
            raise ValueError("Omega, kappa must be d x d and zeta length d")
        if V.shape[1] != d or U.shape != V.shape:
            raise ValueError(
                f"V and U must share shape (m, d={d}); got {V.shape}, {U.shape}"
            )
        if np.abs(Omega - Omega.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("Omega must be Hermitian")
        if np.abs(kappa - kappa.T).max() > HERMITICITY_TOL:
            raise ValueError("kappa must be symmetric")
        if np.abs(V).max() == 0.0 and np.abs(U).max() == 0.0:
            raise ValueError("V and U cannot both be zero")
        object.__setattr__(self, "Omega", Omega)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "U", U)

    @property
    def m(self):
        """Number of Kraus operators."""
        return self.V.shape[0]


def quadratic_free_model(d, V, U):
    """Model with zero Hamiltonian data, dissipator only."""
    return GaussianModel(
        d=d, Omega=np.zeros((d, d)), kappa=np.zeros((d, d)),
        zeta=np.zeros(d), V=V, U=U,
    )


@dataclass(frozen=True, eq=False)
class KossakowskiMatrix:
    """2d x 2d Hermitian PSD matrix with spectral metadata."""

    matrix: np.ndarray
    eps0: float
    rank: int
    strictly_positive: bool
    positivity_tol: float = POSITIVITY_TOL

    @property
    def dim(self):
        return self.matrix.shape[0]


def build_kossakowski(V, U, positivity_tol=POSITIVITY_TOL):
    """Assemble the Kossakowski block matrix of (V, U) with spectral metadata.

    eps0 is the smallest eigenvalue; the rank uses a relative threshold of
    RANK_RTOL times the spectral norm; strict positivity means
    eps0 > positivity_tol.
    """
    V = _as_matrix(V, "V")
    U = _as_matrix(U, "U")
    if V.shape != U.shape:
        raise ValueError(f"V and U must share a shape; got {V.shape}, {U.shape}")
    K = np.block([
        [V.T @ V.conj(), V.T @ U],
        [U.conj().T @ V.conj(), U.conj().T @ U],
    ])
    w = np.linalg.eigvalsh(0.5 * (K + K.conj().T))
    norm = float(np.abs(w).max())
    eps0 = float(w.min())
    rank = int(np.sum(w > RANK_RTOL * norm)) if norm > 0 else 0
    return KossakowskiMatrix(
        matrix=K, eps0=eps0, rank=rank,
        strictly_positive=bool(eps0 > positivity_tol),
        positivity_tol=positivity_tol,
    )


def kossakowski_factor(V, U):
    """The 2d x m factor B with K = B B†."""
    V = _as_matrix(V, "V")
    U = _as_matrix(U, "U")
    return np.vstack([V.T, U.conj().T])


def check_minimality(V, U):
    """True iff the Kraus count m cannot be reduced.

    Equivalent formulations: ker(V†) ∩ ker(U^T) = {0}; the stacked 2d x m
    matrix [[V†], [U^T]] has rank m; rank(K) = m.
    """
    V = _as_matrix(V, "V")
    U = _as_matrix(U, "U")
    if V.shape != U.shape:
        raise ValueError(f"V and U must share a shape; got {V.shape}, {U.shape}")
    stacked = np.vstack([V.conj().T, U.T])
    return int(np.linalg.matrix_rank(stacked)) == V.shape[0]


def mix_kraus(model, r):
    """Replace the Kraus family by L'_l = sum_j r_lj L_j for unitary r.

    On the coefficient matrices this acts as V -> conj(r) V, U -> r U and
    leaves the Kossakowski matrix invariant.
    """
    r = _as_matrix(r, "r")
    m = model.m
    if r.shape != (m, m):
        raise ValueError(f"r must be {m} x {m}, got {r.shape}")
    if np.abs(r.conj().T @ r - np.eye(m)).max() > UNITARITY_TOL:
        raise ValueError("r is not unitary within tolerance")
    return GaussianModel(
        d=model.d, Omega=model.Omega, kappa=model.kappa, zeta=model.zeta,
        V=r.conj() @ model.V, U=r @ model.U,
    )


@dataclass(frozen=True, eq=False)
class BogoliubovPair:
    """Matrices (E, F) of a Bogoliubov transformation.

    Constraints: E†E - F†F = 1 and E^T F - F^T E = 0, which preserve the
    canonical commutation relations of the transformed modes.
    """

    E: np.ndarray
    F: np.ndarray
    tol: float = BOGOLIUBOV_TOL

    def __post_init__(self):
        E = _as_matrix(self.E, "E")
        F = _as_matrix(self.F, "F")
        d = E.shape[0]
        if E.shape != (d, d) or F.shape != (d, d):
            raise ValueError("E and F must be square with equal shape")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "F", F)
        res1 = np.abs(E.conj().T @ E - F.conj().T @ F - np.eye(d)).max()
        res2 = np.abs(E.T @ F - F.T @ E).max()
        if max(res1, res2) > self.tol:
            raise ValueError(
                f"Bogoliubov constraints violated: residuals {res1:.3e}, {res2:.3e}"
            )

    @property
    def d(self):
        return self.E.shape[0]

    def mode_matrix(self):
        """The 2d x 2d matrix [[conj(E), F], [conj(F), E]] acting on (a, a†) coefficients."""
        return np.block([
            [self.E.conj(), self.F],
            [self.F.conj(), self.E],
        ])


def bogoliubov_transform(model, pair):
    """Rewrite the model in Bogoliubov-transformed modes.

    The old modes are expressed as a = E^T b + F^T b†, a† = F† b + E† b†
    (dagger rows entrywise conjugated), and all coefficient matrices are
    pushed through.  The Kossakowski matrix transforms by the congruence
    T K T† with T = pair.mode_matrix(), so strict positivity is preserved
    in both directions; the additive scalar produced by reordering the
    Hamiltonian is dropped.
    """
    if pair.d != model.d:
        raise ValueError(f"pair is for d={pair.d}, model has d={model.d}")
    E, F = pair.E, pair.F
    Eb, Fb = E.conj(), F.conj()
    Ed = E.conj().T
    Omega, kappa, zeta = model.Omega, model.kappa, model.zeta
    V2 = model.V @ Ed + model.U.conj() @ F.T
    U2 = model.V.conj() @ F.T + model.U @ Ed
    Omega2 = (Eb @ Omega @ E.T + F @ Omega.T @ F.conj().T
              + Eb @ kappa @ F.conj().T + F @ kappa.conj() @ E.T)
    kappa2 = (Eb @ Omega @ F.T + F @ Omega.T @ Ed
              + Eb @ kappa @ Ed + F @ kappa.conj() @ F.T)
    zeta2 = Eb @ zeta + F @ zeta.conj()
    Omega2 = 0.5 * (Omega2 + Omega2.conj().T)
    kappa2 = 0.5 * (kappa2 + kappa2.T)
    return GaussianModel(
        d=model.d, Omega=Omega2, kappa=kappa2, zeta=zeta2, V=V2, U=U2,
    )


def generate_bogoliubov(d, seed, rotation=1.0, squeeze=0.5):
    """Seeded Bogoliubov pair from the exponential of a quadratic-Hamiltonian generator.

    A random Hermitian `rot` (scaled by `rotation`) and symmetric `sq`
    (scaled by `squeeze`) are drawn and the mode transformation is
    exp(i [[-rot, -sq], [conj(sq), rot^T]]); squeeze=0 yields F = 0.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rot = rotation * 0.5 * (A + A.conj().T)
    B = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    sq = squeeze * 0.5 * (B + B.T)
    gen = np.block([
        [-rot, -sq],
        [sq.conj(), rot.T],
    ])
    M = scipy.linalg.expm(1j * gen)
    E = M[:d, :d].T.copy()
    F = M[:d, d:].T.copy()
    return BogoliubovPair(E=E, F=F)


@dataclass(frozen=True, eq=False)
class TwoBosonParams:
    """Two modes in a common bath: damping/pumping matrices and a quadratic Hamiltonian."""

    gamma_minus: np.ndarray
    gamma_plus: np.ndarray
    Omega: np.ndarray

    def __post_init__(self):
        gm = _as_matrix(self.gamma_minus, "gamma_minus")
        gp = _as_matrix(self.gamma_plus, "gamma_plus")
        Om = _as_matrix(self.Omega, "Omega")
        for name, g in (("gamma_minus", gm), ("gamma_plus", gp), ("Omega", Om)):
            if g.shape != (2, 2):
                raise ValueError(f"{name} must be 2 x 2")
            if np.abs(g - g.conj().T).max() > HERMITICITY_TOL:
                raise ValueError(f"{name} must be Hermitian")
        for name, g in (("gamma_minus", gm), ("gamma_plus", gp)):
            if np.linalg.eigvalsh(g).min() < -POSITIVITY_TOL:
                raise ValueError(f"{name} must be positive semidefinite")
        object.__setattr__(self, "gamma_minus", gm)
        object.__setattr__(self, "gamma_plus", gp)
        object.__setattr__(self, "Omega", Om)

    def h_matrix(self):
        """Block matrix [[Omega, 0], [0, Omega^T]] of the quadratic Hamiltonian part."""
        z = np.zeros((2, 2), dtype=complex)
        return np.block([[self.Omega, z], [z, self.Omega.T]])


def _descending_eigh(g):
    w, vecs = np.linalg.eigh(g)
    order = np.argsort(w)[::-1]
    return w[order], vecs[:, order]


def two_boson_model(params):
    """Gaussian model for two modes coupled to a common bath.

    The dissipator has two annihilation Kraus rows from the spectral
    decomposition of gamma_minus and two creation rows from gamma_plus
    (zero eigenvalues still emit a zero row, so m = 4 and the Kossakowski
    matrix is exactly blockdiag(gamma_minus, gamma_plus)); kappa = 0 and
    zeta = 0.
    """
    d = 2
    wm, vm = _descending_eigh(params.gamma_minus)
    wp, vp = _descending_eigh(params.gamma_plus)
    wm = np.clip(wm, 0.0, None)
    wp = np.clip(wp, 0.0, None)
    V = np.zeros((4, d), dtype=complex)
    U = np.zeros((4, d), dtype=complex)
    for i in range(2):
        V[i] = np.sqrt(wm[i]) * vm[:, i]
        U[2 + i] = np.sqrt(wp[i]) * vp[:, i].conj()
    return GaussianModel(
        d=d, Omega=params.Omega, kappa=np.zeros((d, d)), zeta=np.zeros(d),
        V=V, U=U,
    )


def model_to_jsonable(model):
    """Encode a GaussianModel using [re, im] pairs for complex entries."""
    return {
        "d": model.d,
        "omega": serialize.complex_to_pairs(model.Omega),
        "kappa": serialize.complex_to_pairs(model.kappa),
        "zeta": serialize.complex_to_pairs(model.zeta),
        "V": serialize.complex_to_pairs(model.V),
        "U": serialize.complex_to_pairs(model.U),
    }


def model_from_jsonable(obj):
    """Decode the JSON model schema; omega/kappa/zeta default to zero."""
    d = int(obj["d"])
    zeros = np.zeros((d, d))
    Omega = serialize.pairs_to_matrix(obj["omega"]) if "omega" in obj else zeros
    kappa = serialize.pairs_to_matrix(obj["kappa"]) if "kappa" in obj else zeros
    zeta = serialize.pairs_to_vector(obj["zeta"]) if "zeta" in obj else np.zeros(d)
    V = serialize.pairs_to_matrix(obj["V"])
    U = serialize.pairs_to_matrix(obj["U"])
    return GaussianModel(d=d, Omega=Omega, kappa=kappa, zeta=zeta, V=V, U=U)
