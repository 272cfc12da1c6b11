"""The Hermitian space C^{n,1}.

The form is fixed to ``<z, w> = w^H J z`` with ``J = diag(-1, 1, ..., 1)``.
Arbitrary Hermitian forms of signature ``(n, 1)`` are brought to this one once,
at ingestion, by `standardize_form`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSubspaceError, DimensionError
from .tolerances import RANK_TOL, RESIDUAL_TOL

__all__ = [
    "HermitianSpace",
    "VectorKind",
    "as_complex_matrix",
    "inner_product",
    "classify_vector",
    "is_form_unitary",
    "form_inverse",
    "gram_matrix",
    "gram_signature",
    "orthonormalize_indefinite",
    "orthogonal_complement",
    "standardize_form",
]


@dataclass(frozen=True)
class HermitianSpace:
    """``C^{n,1}`` with the standard form of signature ``(n, 1)``.

    Parameters
    ----------
    n : int
        Complex hyperbolic dimension; vectors have ``n + 1`` coordinates.
    """

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def dim(self) -> int:
        return self.n + 1

    @cached_property
    def form(self) -> np.ndarray:
        J = np.eye(self.dim)
        J[0, 0] = -1.0
        J.flags.writeable = False
        return J

    @classmethod
    def for_matrix(cls, A) -> "HermitianSpace":
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 2:
            raise DimensionError(f"expected a square matrix of size >= 2, got shape {A.shape}")
        return cls(A.shape[0] - 1)

    def inner(self, z, w) -> complex:
        return inner_product(z, w, self)


class VectorKind(str, enum.Enum):
    TIME_LIKE = "time_like"
    SPACE_LIKE = "space_like"
    LIGHT_LIKE = "light_like"
    ZERO = "zero"


def as_complex_matrix(A, square: bool = False) -> np.ndarray:
    """Validate and convert to a finite complex128 2-d array."""
    M = np.array(A, dtype=complex)
    if M.ndim != 2 or 0 in M.shape:
        raise DimensionError(f"expected a non-empty 2-d array, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _space_for(vec_len: int, space: HermitianSpace | None) -> HermitianSpace:
    if space is None:
        return HermitianSpace(vec_len - 1)
    if space.dim != vec_len:
        raise DimensionError(f"vector of length {vec_len} does not live in C^({space.n},1)")
    return space


def inner_product(z, w, space: HermitianSpace | None = None) -> complex:
    """Evaluate ``<z, w> = -z_0 conj(w_0) + z_1 conj(w_1) + ... + z_n conj(w_n)``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.ndim != 1 or z.shape != w.shape:
        raise DimensionError(f"dimension mismatch: {z.shape} vs {w.shape}")
    _space_for(z.shape[0], space)
    return complex(np.vdot(w, z) - 2.0 * z[0] * np.conj(w[0]))


def classify_vector(v, space: HermitianSpace | None = None, tol: float = RANK_TOL) -> VectorKind:
    """Time-like, space-like, light-like or zero, relative to ``tol * |v|^2``."""
    v = np.asarray(v, dtype=complex)
    space = _space_for(v.shape[0], space)
    norm2 = float(np.vdot(v, v).real)
    if np.sqrt(norm2) <= tol:
        return VectorKind.ZERO
    q = inner_product(v, v, space).real
    if q < -tol * norm2:
        return VectorKind.TIME_LIKE
    if q > tol * norm2:
        return VectorKind.SPACE_LIKE
    return VectorKind.LIGHT_LIKE


def form_unitarity_residual(A, J) -> float:
    """``|A^H J A - J|_F / |J|_F``."""
    A = np.asarray(A)
    return float(np.linalg.norm(A.conj().T @ J @ A - J) / np.linalg.norm(J))


def is_form_unitary(A, space: HermitianSpace | None = None, tol: float = RESIDUAL_TOL):
    """Test ``A^H J A = J``.

    Returns
    -------
    ok : bool
    residual : float
        ``|A^H J A - J|_F / |J|_F``.
    """
    A = as_complex_matrix(A, square=True)
    space = space or HermitianSpace.for_matrix(A)
    if A.shape[0] != space.dim:
        raise DimensionError(f"matrix of size {A.shape[0]} does not act on C^({space.n},1)")
    res = form_unitarity_residual(A, space.form)
    return res <= tol, res


def form_inverse(A, space: HermitianSpace | None = None) -> np.ndarray:
    """Inverse of a form-unitary matrix, ``J A^H J``."""
    A = np.asarray(A, dtype=complex)
    J = (space or HermitianSpace.for_matrix(A)).form
    return J @ A.conj().T @ J


def _columns(vectors, dim: int | None = None) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        V = vectors.astype(complex)
    else:
        vectors = list(vectors)
        if not vectors:
            return np.zeros((dim or 0, 0), dtype=complex)
        V = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    if dim is not None and V.shape[0] != dim:
        raise DimensionError(f"vectors of length {V.shape[0]} do not live in C^({dim - 1},1)")
    return V


def gram_matrix(vectors, space: HermitianSpace | None = None) -> np.ndarray:
    """``G[i, j] = <v_j, v_i>``, i.e. ``V^H J V`` for columns ``v_j``."""
    V = _columns(vectors, space.dim if space else None)
    space = _space_for(V.shape[0], space)
    return V.conj().T @ space.form @ V


def gram_signature(vectors, space: HermitianSpace | None = None, tol: float = RANK_TOL):
    """Inertia ``(positive, negative, zero)`` of the Gram matrix of ``vectors``.

    Eigenvalues with modulus at most ``tol * max(|G|, max_i |v_i|^2)`` count
    as zero.  An empty family gives ``(0, 0, 0)``.
    """
    V = _columns(vectors, space.dim if space else None)
    if V.shape[1] == 0:
        return 0, 0, 0
    G = gram_matrix(V, space)
    ev = np.linalg.eigvalsh((G + G.conj().T) / 2)
    scale = max(float(np.max(np.abs(ev))), float(np.max(np.sum(np.abs(V) ** 2, axis=0))))
    thr = tol * scale
    return int(np.sum(ev > thr)), int(np.sum(ev < -thr)), int(np.sum(np.abs(ev) <= thr))


def orthonormalize_indefinite(vectors, space: HermitianSpace | None = None, tol: float = RANK_TOL):
    """Basis of the span with Gram matrix ``diag(-1, ..., -1, 1, ..., 1)``.

    The span is diagonalized through the Hermitian eigendecomposition of its
    Gram matrix, so negative directions come first.  The input must span its
    hull and the hull must be non-degenerate.

    Returns
    -------
    numpy.ndarray
        Matrix whose columns form the new basis.

    Raises
    ------
    DegenerateSubspaceError
        If the Gram matrix has an eigenvalue below the threshold; the
        offending combination of input vectors is attached.
    """
    V = _columns(vectors, space.dim if space else None)
    if V.shape[1] == 0:
        return V
    # Euclidean orthonormalization first keeps the Gram matrix well scaled.
    Qe, s, _ = np.linalg.svd(V, full_matrices=False)
    if s[-1] <= tol * s[0]:
        raise DegenerateSubspaceError("vectors are linearly dependent", vector=Qe[:, -1])
    G = gram_matrix(Qe, space)
    ev, E = np.linalg.eigh((G + G.conj().T) / 2)
    small = np.abs(ev) <= tol * max(1.0, float(np.max(np.abs(ev))))
    if np.any(small):
        null = Qe @ E[:, int(np.argmax(small))]
        raise DegenerateSubspaceError(
            f"span is degenerate: <v, v> = {ev[small][0]:.3e} for v = {np.round(null, 6)}",
            vector=null,
        )
    B = (Qe @ E) / np.sqrt(np.abs(ev))
    return _fix_phases(B)


def _fix_phases(B: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive."""
    idx = np.argmax(np.abs(B), axis=0)
    piv = B[idx, np.arange(B.shape[1])]
    return B * (np.abs(piv) / piv)


def orthogonal_complement(vectors, space: HermitianSpace | None = None, tol: float = RANK_TOL):
    """Orthonormal basis (for the form) of the form-orthogonal complement.

    The span of ``vectors`` must be non-degenerate, so that the complement is
    non-degenerate too and meets it trivially.
    """
    V = _columns(vectors, space.dim if space else None)
    space = _space_for(V.shape[0], space)
    if V.shape[1] == 0:
        return np.eye(space.dim, dtype=complex)
    # w is orthogonal to every v iff (J v)^H w = 0.
    M = (space.form @ V).conj().T
    _, s, Vh = np.linalg.svd(M)
    rank = int(np.sum(s > tol * s[0]))
    K = Vh[rank:].conj().T
    if K.shape[1] == 0:
        return K
    return orthonormalize_indefinite(K, space, tol)


def standardize_form(H, tol: float = RANK_TOL):
    """Congruence bringing a Hermitian form of signature ``(n, 1)`` to ``J``.

    Returns ``C`` with ``C^H H C = J``.  A matrix ``A`` unitary for ``H``
    becomes ``C^{-1} A C``, unitary for ``J``.
    """
    H = as_complex_matrix(H, square=True)
    if np.linalg.norm(H - H.conj().T) > tol * np.linalg.norm(H):
        raise ValueError("form is not Hermitian")
    ev, E = np.linalg.eigh((H + H.conj().T) / 2)
    thr = tol * float(np.max(np.abs(ev)))
    if np.sum(ev < -thr) != 1 or np.any(np.abs(ev) <= thr):
        raise ValueError(f"form does not have signature (n, 1): eigenvalues {ev}")
    # eigh sorts ascending: the single negative direction comes first.
    return E / np.sqrt(np.abs(ev))
