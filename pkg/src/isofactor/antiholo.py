"""Anti-holomorphic isometries ``v -> A conj(v)``.

Every holomorphic isometry ``T`` is a product ``beta o alpha`` of two
anti-holomorphic involutions.  The construction picks a basis ``C`` whose
Gram matrix is real and a real ``S`` with ``S^2 = I`` preserving that Gram
matrix such that, in ``C``-coordinates, ``S conj(T) S = T^{-1}``.  Then
``alpha = C S conj(C^{-1})`` (read as ``z -> S conj(z)`` in coordinates) is
an anti-holomorphic involution reversing ``T``, and ``beta = T o alpha``.

The bases per class:

* unit-modulus eigenvalues: an eigenbasis, ``S = I``;
* hyperbolic null pair: the frame ``(u - v, u + v)/sqrt 2``, ``S`` swapping
  ``u`` and ``v``;
* vertical block: the null basis in which ``T|U = lambda [[1, +-i], [0, 1]]``,
  ``S = I``;
* non-vertical block: the chain ``(v, N v, N^2 v)``, ``S = diag(1, -1, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .classify import IsometryClass, adapted_frame
from .errors import ConvergenceError, DimensionError
from .factorization import Commutator, Factor, Factorization, FactorTag
from .forms import HermitianSpace, as_complex_matrix
from .jsonio import matrix_to_json
from .sun_factor import unitary_eigenbasis
from .tolerances import resolve
from .un1_factor import nonvertical_chain_basis, vertical_null_basis

__all__ = [
    "AntiholoMap",
    "antiholo_compose",
    "antiholo_split",
    "antiholo_factorization",
    "commutator_antiholo",
    "square_root",
]


@dataclass(frozen=True)
class AntiholoMap:
    """The map ``v -> A conj(v)``."""

    matrix: np.ndarray = field(repr=False)

    def __call__(self, v):
        return self.matrix @ np.conj(np.asarray(v, dtype=complex))

    @property
    def involution_residual(self) -> float:
        """``|A conj(A) - I|_F``."""
        A = self.matrix
        return float(np.linalg.norm(A @ np.conj(A) - np.eye(A.shape[0])))

    def to_json(self) -> dict:
        out = matrix_to_json(self.matrix)
        out["antiholomorphic"] = True
        return out


def _parts(f):
    if isinstance(f, AntiholoMap):
        return f.matrix, True
    return np.asarray(f, dtype=complex), False


def antiholo_compose(f, g):
    """``f o g`` for holomorphic matrices and `AntiholoMap` values.

    ``(A c)(B c) = A conj(B)`` is holomorphic, ``A (B c) = (A B) c`` and
    ``(A c) B = (A conj(B)) c`` are anti-holomorphic.
    """
    A, fa = _parts(f)
    B, ga = _parts(g)
    if A.shape != B.shape:
        raise DimensionError(f"cannot compose maps of shapes {A.shape} and {B.shape}")
    M = A @ (np.conj(B) if fa else B)
    return AntiholoMap(M) if fa ^ ga else M


@dataclass(frozen=True)
class _AntiFrame:
    """Basis ``C`` with real Gram matrix, real involution ``S`` and the
    square-root data of ``T`` in ``C``-coordinates."""

    C: np.ndarray
    S: np.ndarray
    root: np.ndarray  # square root of C^{-1} T C, reversed by S o conj


def _sqrt_unit(d):
    return np.exp(0.5j * np.angle(d))


def _unipotent_sqrt(P):
    D = P - np.eye(P.shape[0])
    return np.eye(P.shape[0]) + D / 2 - D @ D / 8


def _anti_frame(T, tols) -> _AntiFrame:
    frame = adapted_frame(T, tols)
    kind = frame.classification.isometry_class
    m = T.shape[0]
    if kind is IsometryClass.CENTRAL:
        mu = np.trace(T) / m
        return _AntiFrame(np.eye(m, dtype=complex), np.eye(m), _sqrt_unit(mu / abs(mu)) * np.eye(m))
    h = frame.head
    M = frame.tail_block
    if M.shape[0]:
        d, Q = unitary_eigenbasis(M)
    else:
        d, Q = np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex)
    tail_root = np.diag(_sqrt_unit(d))
    H = frame.head_block
    if kind is IsometryClass.ELLIPTIC:
        Ch = np.eye(1, dtype=complex)
        Sh = np.eye(1)
        head_root = _sqrt_unit(H[0, 0]).reshape(1, 1)
    elif kind is IsometryClass.HYPERBOLIC:
        Ch = np.eye(2, dtype=complex)
        Sh = np.diag([-1.0, 1.0])
        lam = frame.classification.null_eigenvalue
        r, half = np.sqrt(abs(lam)), _sqrt_unit(lam)
        UV = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2)  # columns u, v
        head_root = UV @ np.diag([r * half, half / r]) @ np.linalg.inv(UV)
    else:
        lam = frame.classification.null_eigenvalue
        P = H / lam
        if h == 2:
            x, y, _ = vertical_null_basis(P)
            Ch = np.column_stack([x, y])
            Sh = np.eye(2)
        else:
            Ch = np.column_stack(nonvertical_chain_basis(P))
            Sh = np.diag([1.0, -1.0, 1.0])
        head_root = _sqrt_unit(lam) * np.linalg.inv(Ch) @ _unipotent_sqrt(P) @ Ch
    C = frame.basis @ scipy.linalg.block_diag(Ch, Q)
    S = scipy.linalg.block_diag(Sh, np.eye(len(d)))
    root = scipy.linalg.block_diag(head_root, tail_root)
    return _AntiFrame(C, S, root)


def _alpha(af: _AntiFrame) -> np.ndarray:
    return af.C @ af.S @ np.conj(np.linalg.inv(af.C))


def antiholo_split(T, tol=None):
    """``T = beta o alpha`` with anti-holomorphic involutions.

    Returns
    -------
    (AntiholoMap, AntiholoMap)
        ``(beta, alpha)`` with ``A_beta conj(A_alpha) = T``.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    HermitianSpace.for_matrix(T)
    A = _alpha(_anti_frame(T, tols))
    return AntiholoMap(T @ A), AntiholoMap(A)


def antiholo_factorization(T, tol=None) -> Factorization:
    """`antiholo_split` packaged as a two-factor `Factorization`."""
    beta, alpha = antiholo_split(T, tol)
    factors = (
        Factor(beta.matrix, FactorTag.ANTIHOLO_INVOLUTION),
        Factor(alpha.matrix, FactorTag.ANTIHOLO_INVOLUTION),
    )
    return Factorization(1.0 + 0j, factors, np.asarray(T, dtype=complex), form="indefinite")


def square_root(T, tol=None) -> np.ndarray:
    """Square root of ``T`` in U(n,1) that the reversing involution of ``T`` also reverses.

    Unit eigenvalues take principal roots, the hyperbolic pair
    ``r e^{it}, e^{it}/r`` goes to ``sqrt(r) e^{it/2}, e^{it/2}/sqrt(r)`` and a
    unipotent block ``P`` to ``I + D/2 - D^2/8`` with ``D = P - I``.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    af = _anti_frame(T, tols)
    return af.C @ af.root @ np.linalg.inv(af.C)


def commutator_antiholo(A, tol=None) -> Commutator:
    """``A = [beta, alpha]`` with anti-holomorphic involutions.

    With ``B^2 = A`` and ``B = beta o alpha`` (same ``alpha`` as for ``A``),
    ``beta alpha beta alpha = B^2 = A``.

    Raises
    ------
    ConvergenceError
        If the square root misses ``A`` by more than ``100 * tol.residual``.
    """
    tols = resolve(tol)
    A = as_complex_matrix(A, square=True)
    af = _anti_frame(A, tols)
    Cinv = np.linalg.inv(af.C)
    B = af.C @ af.root @ Cinv
    defect = float(np.linalg.norm(B @ B - A) / np.linalg.norm(A))
    if defect > 100 * tols.residual:
        raise ConvergenceError(f"square root misses the target by {defect:.3e}", residual=defect)
    alpha = af.C @ af.S @ np.conj(Cinv)
    beta = B @ alpha
    return Commutator(beta, alpha, A, antiholomorphic=True)
