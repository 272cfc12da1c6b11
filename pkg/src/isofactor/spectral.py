"""Dense complex eigen-machinery.

`schur` is a Householder Hessenberg reduction followed by Wilkinson-shifted
QR sweeps with deflation.  `eigen_structure` clusters the Schur diagonal and
measures geometric and generalized multiplicities by SVD rank decisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import AmbiguousRankError, ConvergenceError, DimensionError
from .forms import HermitianSpace, as_complex_matrix
from .rng import stream
from .tolerances import CLUSTER_TOL, RANK_TOL, RESIDUAL_TOL

__all__ = [
    "Eigenvalue",
    "Spectrum",
    "schur",
    "eigen_structure",
    "minimal_poly_exponent",
    "kernel",
    "unitary_log_sample",
    "expm",
]

_EPS = np.finfo(float).eps
# A singular value this close (multiplicatively) to a threshold is ambiguous.
_AMBIGUITY_BAND = 10.0


def _hessenberg(A):
    n = A.shape[0]
    H = A.copy()
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = H[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v.conj())
        Q[:, k + 1 :] -= 2.0 * np.outer(Q[:, k + 1 :] @ v, v.conj())
        H[k + 2 :, k] = 0.0
    return H, Q


def _givens(a: complex, b: complex) -> np.ndarray:
    """Unitary ``G`` with ``G @ [a, b] = [r, 0]``."""
    if b == 0:
        return np.eye(2, dtype=complex)
    if a == 0:
        return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    nrm = np.hypot(abs(a), abs(b))
    c = abs(a) / nrm
    s = (a / abs(a)) * np.conj(b) / nrm
    return np.array([[c, s], [-np.conj(s), c]])


def _wilkinson_shift(a, b, c, d) -> complex:
    half = (a - d) / 2.0
    disc = np.sqrt(half * half + b * c)
    mid = (a + d) / 2.0
    mu1, mu2 = mid + disc, mid - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def schur(A, tol: float = RESIDUAL_TOL, max_sweeps: int | None = None):
    """Complex Schur decomposition ``A = Q U Q^H``.

    Parameters
    ----------
    A : array_like, shape (m, m)
        Square finite matrix.
    tol : float
        Relative reconstruction tolerance checked on exit.
    max_sweeps : int, optional
        QR sweep budget; defaults to ``50 * m**2``.

    Returns
    -------
    Q : ndarray
        Unitary (Euclidean) matrix.
    U : ndarray
        Upper triangular; its diagonal holds the eigenvalues.

    Raises
    ------
    ConvergenceError
        When the budget is exhausted or the final residual exceeds ``tol``.
    """
    A = as_complex_matrix(A, square=True)
    n = A.shape[0]
    H, Q = _hessenberg(A)
    norm_a = np.linalg.norm(A)
    if n == 1 or norm_a == 0.0:
        return Q, np.triu(H)
    budget = max_sweeps if max_sweeps is not None else 50 * n * n
    sweeps = 0
    stall = 0
    hi = n - 1
    while hi > 0:
        lo = hi
        while lo > 0:
            scale = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if scale == 0.0:
                scale = norm_a
            if abs(H[lo, lo - 1]) <= _EPS * scale:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            stall = 0
            continue
        sweeps += 1
        stall += 1
        if sweeps > budget:
            resid = np.linalg.norm(np.tril(H, -1)) / norm_a
            raise ConvergenceError(f"QR iteration did not converge in {budget} sweeps", residual=resid)
        if stall % 11 == 10:
            # exceptional shift breaks cycles of the Wilkinson shift
            mu = H[hi, hi] + 1.5 * abs(H[hi, hi - 1]) * np.exp(1j * stall)
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        idx = np.arange(lo, hi + 1)
        H[idx, idx] -= mu
        rotations = []
        for k in range(lo, hi):
            G = _givens(H[k, k], H[k + 1, k])
            H[k : k + 2, k:] = G @ H[k : k + 2, k:]
            H[k + 1, k] = 0.0
            rotations.append(G)
        for k, G in zip(range(lo, hi), rotations):
            Gh = G.conj().T
            top = min(k + 2, hi) + 1
            H[:top, k : k + 2] = H[:top, k : k + 2] @ Gh
            Q[:, k : k + 2] = Q[:, k : k + 2] @ Gh
        H[idx, idx] += mu
    U = np.triu(H)
    resid = np.linalg.norm(A - Q @ U @ Q.conj().T) / norm_a
    if resid > tol:
        raise ConvergenceError(f"Schur residual {resid:.3e} exceeds {tol:.1e}", residual=resid)
    return Q, U


def kernel(M, threshold: float, check_ambiguity: bool = True):
    """Orthonormal basis of the numerical kernel of ``M``.

    Singular values ``<= threshold`` count as zero.  With
    ``check_ambiguity`` a singular value within a factor 10 of the threshold
    raises `AmbiguousRankError`.
    """
    _, s, Vh = np.linalg.svd(M)
    if check_ambiguity:
        band = (s > threshold / _AMBIGUITY_BAND) & (s < threshold * _AMBIGUITY_BAND)
        if np.any(band):
            sv = float(s[band][0])
            raise AmbiguousRankError(
                f"singular value {sv:.3e} is within a factor {_AMBIGUITY_BAND:g} of the "
                f"rank threshold {threshold:.3e}; adjust the tolerances",
                singular_value=sv,
                threshold=threshold,
            )
    null = s <= threshold
    return Vh[null].conj().T


@dataclass(frozen=True)
class Eigenvalue:
    """One cluster of the spectrum.

    Attributes
    ----------
    value : complex
        Mean of the clustered Schur eigenvalues.
    alg_mult, geo_mult : int
    eigenspace : ndarray, shape (m, geo_mult)
        Euclidean-orthonormal basis of ``ker(A - value I)``.
    generalized : ndarray, shape (m, alg_mult)
        Euclidean-orthonormal basis of the generalized eigenspace.
    index : int
        Smallest ``k`` with ``dim ker (A - value I)^k = alg_mult``.
    """

    value: complex
    alg_mult: int
    geo_mult: int
    eigenspace: np.ndarray = field(repr=False)
    generalized: np.ndarray = field(repr=False)
    index: int = 1

    @property
    def semisimple(self) -> bool:
        return self.geo_mult == self.alg_mult


@dataclass(frozen=True)
class Spectrum:
    """Clustered spectrum of a square matrix."""

    eigenvalues: tuple
    Q: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    radius: float = 0.0

    def __iter__(self):
        return iter(self.eigenvalues)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def semisimple(self) -> bool:
        return all(ev.semisimple for ev in self.eigenvalues)

    def find(self, lam: complex) -> Eigenvalue:
        """The cluster within the clustering radius of ``lam``."""
        best = min(self.eigenvalues, key=lambda ev: abs(ev.value - lam))
        if abs(best.value - lam) > self.radius:
            raise ValueError(f"{lam} is not an eigenvalue (nearest is {best.value})")
        return best


def _single_linkage(values: np.ndarray, radius: float) -> list[list[int]]:
    m = len(values)
    parent = list(range(m))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(values[i] - values[j]) <= radius:
                parent[root(i)] = root(j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(root(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _power_kernels(A, lam, scale, rank_tol, max_power):
    """Kernels of ``(A - lam I)^k`` for k = 1, 2, ... until they stabilize."""
    m = A.shape[0]
    B = A - lam * np.eye(m)
    P = np.eye(m, dtype=complex)
    kernels = []
    for k in range(1, max_power + 1):
        P = P @ B
        K = kernel(P, rank_tol * scale)
        kernels.append(K)
        if K.shape[1] == 0:
            break
        if k > 1 and K.shape[1] == kernels[-2].shape[1]:
            kernels.pop()
            break
    return kernels


def _resolve_clusters(A, diag, members, radius, scale, rank_tol, floor):
    """Split clusters whose mean is not an eigenvalue (distinct close eigenvalues)."""
    lam = complex(np.mean(diag[members]))
    if len(members) == 1:
        return [members]
    K = kernel(A - lam * np.eye(A.shape[0]), rank_tol * scale, check_ambiguity=False)
    if K.shape[1] > 0 or radius / 2 < floor:
        return [members]
    out = []
    for sub in _single_linkage(diag[members], radius / 2):
        out.extend(_resolve_clusters(A, diag, [members[i] for i in sub], radius / 2, scale, rank_tol, floor))
    return out


def eigen_structure(A, cluster_tol: float = CLUSTER_TOL, rank_tol: float = RANK_TOL) -> Spectrum:
    """Clustered eigenvalues with multiplicities and (generalized) eigenspaces.

    The Schur diagonal is grouped by single linkage with radius
    ``cluster_tol * max(1, |A|_2)``.  A group whose mean is not an eigenvalue
    of ``A`` (no kernel at the mean) holds distinct nearby eigenvalues and is
    re-split with halved radii.  Multiplicities come from SVD rank decisions
    at threshold ``rank_tol * max(1, |A|_2)`` for every power; rounding in the
    powers stays near ``eps |A|^k``, far below it.
    """
    A = as_complex_matrix(A, square=True)
    Q, U = schur(A)
    diag = np.diag(U).copy()
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    radius = cluster_tol * scale
    groups = []
    for g in _single_linkage(diag, radius):
        groups.extend(_resolve_clusters(A, diag, g, radius, scale, rank_tol, 1e-6 * radius))
    eigenvalues = []
    for g in groups:
        lam = complex(np.mean(diag[g]))
        alg = len(g)
        kernels = _power_kernels(A, lam, scale, rank_tol, max_power=alg + 1)
        if not kernels or kernels[0].shape[1] == 0:
            raise AmbiguousRankError(f"no kernel found at clustered eigenvalue {lam}; adjust the tolerances")
        generalized = kernels[-1]
        if generalized.shape[1] != alg:
            raise AmbiguousRankError(
                f"generalized eigenspace at {lam} has dimension {generalized.shape[1]} "
                f"but the cluster has {alg} eigenvalues; adjust the tolerances"
            )
        eigenvalues.append(
            Eigenvalue(
                value=lam,
                alg_mult=alg,
                geo_mult=kernels[0].shape[1],
                eigenspace=kernels[0],
                generalized=generalized,
                index=len(kernels),
            )
        )
    eigenvalues.sort(key=lambda ev: (np.angle(ev.value) % (2 * np.pi), -abs(ev.value)))
    return Spectrum(tuple(eigenvalues), Q, U, radius)


def minimal_poly_exponent(A, lam: complex, rank_tol: float = RANK_TOL, cluster_tol: float = CLUSTER_TOL) -> int:
    """Exponent of ``(x - lam)`` in the minimal polynomial of ``A``.

    Raises
    ------
    ValueError
        If ``lam`` is not within the clustering radius of an eigenvalue.
    """
    return eigen_structure(A, cluster_tol, rank_tol).find(lam).index


def expm(X) -> np.ndarray:
    """Matrix exponential (scaling and squaring with a Pade core)."""
    return scipy.linalg.expm(np.asarray(X, dtype=complex))


def random_anti_hermitian(rng: np.random.Generator, m: int, norm: float = 1.0, traceless: bool = False):
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    K = (G - G.conj().T) / 2.0
    if traceless:
        K -= np.trace(K) / m * np.eye(m)
    nrm = np.linalg.norm(K, 2)
    return K if nrm == 0 else K * (norm / nrm)


def unitary_log_sample(space: HermitianSpace, seed: int, scale: float = 1.0, purpose: str = "unitary_log_sample"):
    """Seeded random element ``exp(J K)`` of U(n,1).

    ``K`` is anti-Hermitian with spectral norm ``scale``; since ``JK`` is
    skew for the form, the exponential preserves it.  ``scale=0`` gives the
    identity.
    """
    if isinstance(space, int):
        space = HermitianSpace(space)
    if scale == 0:
        return np.eye(space.dim, dtype=complex)
    K = random_anti_hermitian(stream(seed, purpose), space.dim, scale)
    return expm(space.form @ K)


def check_square(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A
