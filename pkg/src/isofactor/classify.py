"""Conjugacy classification of elements of U(n,1).

Besides the class itself this module produces the data every factorizer
needs: eigenvalue types, the invariant splitting ``C^{n,1} = U + W`` of a
parabolic element, and an adapted form-unitary frame in which the element is
block diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    AmbiguousRankError,
    ClassMismatchError,
    DegenerateSubspaceError,
    NotFormUnitaryError,
)
from .forms import (
    HermitianSpace,
    as_complex_matrix,
    form_unitarity_residual,
    gram_matrix,
    gram_signature,
    orthogonal_complement,
    orthonormalize_indefinite,
)
from .jsonio import complex_to_json
from .spectral import Spectrum, eigen_structure
from .tolerances import Tolerances, resolve

__all__ = [
    "EigenvalueType",
    "IsometryClass",
    "Classification",
    "InvariantSplit",
    "ReflectionKind",
    "Frame",
    "eigenvalue_type",
    "classify_isometry",
    "parabolic_split",
    "reflection_kind",
    "rescale_to_unit_null_eigenvalue",
    "adapted_frame",
]


class EigenvalueType(str, enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    NULL = "null"
    INDEFINITE = "indefinite"


class IsometryClass(str, enum.Enum):
    CENTRAL = "central"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    VERTICAL_TRANSLATION = "vertical_translation"
    NON_VERTICAL_TRANSLATION = "non_vertical_translation"
    ELLIPTO_TRANSLATION = "ellipto_translation"
    ELLIPTO_PARABOLIC = "ellipto_parabolic"

    @property
    def parabolic(self) -> bool:
        return self in _PARABOLIC

    @property
    def unipotent(self) -> bool:
        return self in (IsometryClass.VERTICAL_TRANSLATION, IsometryClass.NON_VERTICAL_TRANSLATION)


_PARABOLIC = frozenset(
    {
        IsometryClass.VERTICAL_TRANSLATION,
        IsometryClass.NON_VERTICAL_TRANSLATION,
        IsometryClass.ELLIPTO_TRANSLATION,
        IsometryClass.ELLIPTO_PARABOLIC,
    }
)


def _type_from_signature(p: int, q: int, z: int):
    m = p + q + z
    if z == 0 and q == 0:
        return EigenvalueType.POSITIVE, None
    if z == 0 and p == 0 and q == m:
        return EigenvalueType.NEGATIVE, None
    if z > 0 and q == 0:
        return EigenvalueType.NULL, None
    if z == 0 and q == 1:
        return EigenvalueType.INDEFINITE, (p, 1)
    raise AmbiguousRankError(f"eigenspace signature {(p, q, z)} is impossible in C^(n,1); adjust the tolerances")


@dataclass(frozen=True)
class Classification:
    """Result of `classify_isometry`.

    Attributes
    ----------
    isometry_class : IsometryClass
    spectrum : Spectrum or None
        ``None`` for central elements.
    types : tuple
        ``(EigenvalueType, signature or None)`` aligned with
        ``spectrum.eigenvalues``.
    null_eigenvalue : complex or None
        Parabolic: the null eigenvalue carrying the Jordan block.
        Hyperbolic: the null eigenvalue of modulus ``r > 1``.
    k : int or None
        Size of the degenerate block of a parabolic element.
    scalar : complex or None
        The scalar of a central element.
    """

    isometry_class: IsometryClass
    spectrum: Spectrum | None = field(default=None, repr=False)
    types: tuple = ()
    null_eigenvalue: complex | None = None
    k: int | None = None
    scalar: complex | None = None

    @property
    def hyperbolic_pair(self):
        if self.isometry_class is not IsometryClass.HYPERBOLIC:
            return None
        lam = self.null_eigenvalue
        return lam, 1.0 / np.conj(lam)

    def to_json(self) -> dict:
        out = {"class": self.isometry_class.value, "eigenvalues": []}
        if self.spectrum is not None:
            for ev, (etype, sig) in zip(self.spectrum, self.types):
                entry = {
                    "lambda": complex_to_json(ev.value),
                    "alg": ev.alg_mult,
                    "geo": ev.geo_mult,
                    "type": etype.value,
                }
                if sig is not None:
                    entry["signature"] = list(sig)
                out["eigenvalues"].append(entry)
        if self.k is not None:
            out["k"] = self.k
        if self.null_eigenvalue is not None:
            out["null_eigenvalue"] = complex_to_json(self.null_eigenvalue)
        if self.scalar is not None:
            out["lift_scalar"] = complex_to_json(self.scalar)
        return out


def _checked(T, tols: Tolerances):
    T = as_complex_matrix(T, square=True)
    space = HermitianSpace.for_matrix(T)
    res = form_unitarity_residual(T, space.form)
    if res > tols.residual * 10:
        raise NotFormUnitaryError(f"matrix is not unitary for the form (residual {res:.3e})", residual=res)
    return T, space


def _types(spectrum: Spectrum, space: HermitianSpace, tols: Tolerances):
    return tuple(_type_from_signature(*gram_signature(ev.eigenspace, space, tols.rank)) for ev in spectrum)


def eigenvalue_type(T, lam: complex, tol=None):
    """Type of the eigenvalue ``lam`` of ``T``.

    Returns
    -------
    (EigenvalueType, signature or None)
        The signature ``(r, 1)`` is reported for indefinite eigenvalues.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    space = HermitianSpace.for_matrix(T)
    ev = eigen_structure(T, tols.cluster, tols.rank).find(lam)
    return _type_from_signature(*gram_signature(ev.eigenspace, space, tols.rank))


def classify_isometry(T, tol=None) -> Classification:
    """Decide the conjugacy class of a form-unitary matrix.

    The unipotency test for the translation subclasses is applied to ``T``
    itself, not to a rescaled lift; ``e^{it}`` times a translation is
    reported as an ellipto-variant.

    Raises
    ------
    NotFormUnitaryError
    AmbiguousRankError
        When a rank decision falls inside the ambiguity band.
    """
    tols = resolve(tol)
    T, space = _checked(T, tols)
    m = space.dim
    mean = np.trace(T) / m
    if np.linalg.norm(T - mean * np.eye(m)) <= tols.rank * np.linalg.norm(T):
        return Classification(IsometryClass.CENTRAL, scalar=complex(mean / abs(mean)))
    spectrum = eigen_structure(T, tols.cluster, tols.rank)
    types = _types(spectrum, space, tols)
    off_circle = [ev for ev in spectrum if abs(abs(ev.value) - 1.0) > tols.modulus]
    if off_circle:
        big = max(spectrum, key=lambda ev: abs(ev.value))
        return Classification(IsometryClass.HYPERBOLIC, spectrum, types, null_eigenvalue=big.value)
    if spectrum.semisimple:
        return Classification(IsometryClass.ELLIPTIC, spectrum, types)
    defective = [ev for ev in spectrum if not ev.semisimple]
    if len(defective) != 1 or defective[0].index not in (2, 3):
        raise AmbiguousRankError(
            "Jordan structure "
            + ", ".join(f"{ev.value:.4g}: index {ev.index}" for ev in defective)
            + " is impossible in U(n,1); adjust the tolerances"
        )
    ev = defective[0]
    k = ev.index
    unipotent = len(spectrum) == 1 and abs(ev.value - 1.0) <= tols.modulus
    if unipotent:
        cls = IsometryClass.VERTICAL_TRANSLATION if k == 2 else IsometryClass.NON_VERTICAL_TRANSLATION
    else:
        cls = IsometryClass.ELLIPTO_TRANSLATION if k == 2 else IsometryClass.ELLIPTO_PARABOLIC
    return Classification(cls, spectrum, types, null_eigenvalue=ev.value, k=k)


@dataclass(frozen=True)
class InvariantSplit:
    """Orthogonal T-invariant splitting ``C^{n,1} = U + W`` of a parabolic.

    Both bases are orthonormal for the form; ``u_basis`` starts with its
    single time-like vector.
    """

    u_basis: np.ndarray
    w_basis: np.ndarray
    k: int
    null_eigenvalue: complex


def parabolic_split(T, tol=None, classification: Classification | None = None) -> InvariantSplit:
    """Split off the degenerate Jordan block of a parabolic element.

    ``U`` is the cyclic subspace ``span{v, Nv, ..., N^{k-1} v}`` of
    ``N = T - lambda I`` for the generalized-eigenspace vector ``v`` on which
    ``N^{k-1}`` is largest; ``W`` is its orthogonal complement.
    """
    tols = resolve(tol)
    T, space = _checked(T, tols)
    cls = classification or classify_isometry(T, tols)
    if not cls.isometry_class.parabolic:
        raise ClassMismatchError(f"parabolic_split needs a parabolic element, got {cls.isometry_class.value}")
    lam, k = cls.null_eigenvalue, cls.k
    ev = cls.spectrum.find(lam)
    N = T - lam * np.eye(space.dim)
    G = ev.generalized
    top = np.linalg.matrix_power(N, k - 1) @ G
    _, _, Vh = np.linalg.svd(top)
    v = G @ Vh[0].conj()
    chain = [v]
    for _ in range(k - 1):
        chain.append(N @ chain[-1])
    chain = np.column_stack(chain[::-1])
    sig = gram_signature(chain, space, tols.rank)
    if sig != (k - 1, 1, 0):
        raise DegenerateSubspaceError(f"cyclic block has signature {sig}, expected {(k - 1, 1, 0)}")
    U = orthonormalize_indefinite(chain, space, tols.rank)
    W = orthogonal_complement(U, space, tols.rank)
    return InvariantSplit(U, W, k, lam)


class ReflectionKind(NamedTuple):
    is_k_reflection: bool
    k: int | None
    lam: complex | None


def reflection_kind(T, tol=None) -> ReflectionKind:
    """Detect a complex k-reflection.

    ``T`` must be semisimple with eigenvalue ``lambda`` of multiplicity
    ``k + 1`` whose eigenspace contains the time-like direction, and
    eigenvalue 1 of multiplicity ``n - k`` on a space-like eigenspace.  The
    identity counts as the trivial reflection ``(True, 0, 1)``.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    space = HermitianSpace.for_matrix(T)
    m = space.dim
    no = ReflectionKind(False, None, None)
    if form_unitarity_residual(T, space.form) > 10 * tols.residual:
        return no
    if np.linalg.norm(T - np.eye(m)) <= tols.rank * np.sqrt(m):
        return ReflectionKind(True, 0, 1.0 + 0j)
    try:
        spectrum = eigen_structure(T, tols.cluster, tols.rank)
        types = _types(spectrum, space, tols)
    except AmbiguousRankError:
        return no
    if not spectrum.semisimple or any(abs(abs(ev.value) - 1) > tols.modulus for ev in spectrum):
        return no
    ones = [i for i, ev in enumerate(spectrum) if abs(ev.value - 1) <= spectrum.radius]
    others = [i for i in range(len(spectrum)) if i not in ones]
    if len(others) != 1 or len(ones) > 1:
        return no
    lam_ev = spectrum.eigenvalues[others[0]]
    if types[others[0]][0] not in (EigenvalueType.NEGATIVE, EigenvalueType.INDEFINITE):
        return no
    if ones and types[ones[0]][0] is not EigenvalueType.POSITIVE:
        return no
    return ReflectionKind(True, lam_ev.alg_mult - 1, lam_ev.value)


def rescale_to_unit_null_eigenvalue(T, tol=None):
    """Lift with null eigenvalue 1.

    Returns ``(c, T / c)`` where ``c`` is the null eigenvalue of a parabolic
    ``T`` (or the phase of the null pair of a hyperbolic one).
    """
    cls = classify_isometry(T, tol)
    if cls.null_eigenvalue is None:
        raise ClassMismatchError(f"{cls.isometry_class.value} element has no null eigenvalue")
    lam = cls.null_eigenvalue
    c = lam / abs(lam)
    return c, np.asarray(T, dtype=complex) / c


@dataclass(frozen=True)
class Frame:
    """Form-unitary basis adapted to the conjugacy class of ``T``.

    In the basis ``C`` (``C^H J C = J``) the element is block diagonal:
    a head block on the first ``head`` coordinates (the time-like eigenline
    of an elliptic, the null-pair plane of a hyperbolic, the degenerate
    block ``U`` of a parabolic) and a unitary tail block on the space-like
    rest.

    For a hyperbolic frame the null eigenvectors are, in local coordinates,
    ``u = (1, 1)/sqrt 2`` (modulus > 1) and ``v = (-1, 1)/sqrt 2`` with
    ``<u, v> = 1``.
    """

    basis: np.ndarray
    head: int
    local: np.ndarray
    classification: Classification

    @property
    def head_block(self) -> np.ndarray:
        return self.local[: self.head, : self.head]

    @property
    def tail_block(self) -> np.ndarray:
        return self.local[self.head :, self.head :]

    @property
    def leakage(self) -> float:
        """Size of the off-diagonal blocks that the frame drops."""
        h = self.head
        return float(np.linalg.norm(self.local[:h, h:]) + np.linalg.norm(self.local[h:, :h]))

    def to_global(self, M) -> np.ndarray:
        C = self.basis
        m = C.shape[0]
        J = np.eye(m)
        J[0, 0] = -1
        return C @ M @ (J @ C.conj().T @ J)


def _time_like_eigenline(T, cls: Classification, space, tols):
    for ev, (etype, _) in zip(cls.spectrum, cls.types):
        if etype in (EigenvalueType.NEGATIVE, EigenvalueType.INDEFINITE):
            E = ev.eigenspace
            w, Y = np.linalg.eigh(gram_matrix(E, space))
            x = E @ Y[:, 0]
            return x / np.sqrt(-np.real(np.vdot(x, space.form @ x)))
    raise AmbiguousRankError("elliptic element without a time-like eigenvector; adjust the tolerances")


def adapted_frame(T, tol=None, classification: Classification | None = None) -> Frame:
    """Form-unitary basis splitting ``T`` into head and unitary tail blocks."""
    tols = resolve(tol)
    T, space = _checked(T, tols)
    cls = classification or classify_isometry(T, tols)
    kind = cls.isometry_class
    if kind is IsometryClass.CENTRAL:
        C = np.eye(space.dim, dtype=complex)
        head = 1
    elif kind is IsometryClass.ELLIPTIC:
        x = _time_like_eigenline(T, cls, space, tols)
        C = np.column_stack([x, orthogonal_complement(x[:, None], space, tols.rank)])
        head = 1
    elif kind is IsometryClass.HYPERBOLIC:
        lam_big = cls.null_eigenvalue
        big = cls.spectrum.find(lam_big)
        small = min(cls.spectrum, key=lambda ev: abs(ev.value))
        if big.geo_mult != 1 or small.geo_mult != 1:
            raise AmbiguousRankError("null eigenvalues of a hyperbolic element must be simple")
        u = big.eigenspace[:, 0]
        v = small.eigenspace[:, 0]
        u = u / np.vdot(v, space.form @ u)  # <u, v> = 1
        h0 = (u - v) / np.sqrt(2)
        h1 = (u + v) / np.sqrt(2)
        H = np.column_stack([h0, h1])
        C = np.column_stack([H, orthogonal_complement(H, space, tols.rank)])
        head = 2
    else:
        split = parabolic_split(T, tols, cls)
        C = np.column_stack([split.u_basis, split.w_basis])
        head = split.k
    local = space.form @ C.conj().T @ space.form @ T @ C
    return Frame(C, head, local, cls)
