"""Factorizations in U(n,1): at most four involutions and one complex
k-reflection (k <= 2) per element, plus the strongly reversible splitter and
the Hermitian witness of an involution.

Every factorizer works in the adapted frame of `classify.adapted_frame`,
where the element is block diagonal (head block on the time-like line, the
null-pair plane or the degenerate block ``U``; unitary tail on ``W``), builds
local factors block by block and maps them back.  Determinants are free:
factors live in U(n,1), and the scalar ``lift_scalar`` absorbs the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .classify import (
    Classification,
    EigenvalueType,
    Frame,
    IsometryClass,
    adapted_frame,
    classify_isometry,
)
from .errors import ClassMismatchError, ConvergenceError, NotReversibleError
from .factorization import Factor, Factorization, FactorTag
from .forms import HermitianSpace, as_complex_matrix, orthonormalize_indefinite
from .sun_factor import factor_su, reversible_to_two_involutions, two_reversible_split
from .tolerances import resolve

__all__ = [
    "HermitianWitness",
    "hermitian_witness",
    "strongly_reversible_split_un1",
    "factor_elliptic",
    "factor_hyperbolic",
    "factor_translation",
    "factor_ellipto_translation",
    "factor_ellipto_parabolic",
    "decompose",
    "vertical_block_involutions",
    "nonvertical_block_involutions",
    "vertical_null_basis",
    "nonvertical_chain_basis",
]

WITNESS_TOL = 1e-8
_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class HermitianWitness:
    """Outcome of `hermitian_witness`.

    ``matrix`` is ``H = J A^H`` when it is Hermitian (``A = H J``), else
    ``None``; ``defect`` is ``|H - H^H|_F`` either way.  Truthy iff found.
    """

    matrix: np.ndarray | None = field(repr=False)
    defect: float

    def __bool__(self) -> bool:
        return self.matrix is not None


def hermitian_witness(A, tol: float = WITNESS_TOL) -> HermitianWitness:
    """Write an involution ``A`` of U(n,1) as ``H J`` with ``H`` Hermitian.

    ``H = J A^H`` always satisfies ``A = H J`` for form-unitary ``A``; it is
    Hermitian exactly when ``A^2 = I``.
    """
    A = as_complex_matrix(A, square=True)
    J = HermitianSpace.for_matrix(A).form
    H = J @ A.conj().T
    defect = float(np.linalg.norm(H - H.conj().T))
    return HermitianWitness(H if defect <= tol else None, defect)


def _blocks(*mats) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.asarray(m, dtype=complex) for m in mats if np.size(m)]).astype(complex)


def _unit(z: complex) -> complex:
    return complex(z / abs(z))


def _root(delta: complex, m: int) -> complex:
    """Principal ``m``-th root of a unit scalar (1 when ``m == 0``)."""
    if m == 0:
        return 1.0 + 0j
    return complex(np.exp(1j * np.angle(delta) / m))


def _null_swap(a, b, form) -> tuple[np.ndarray, np.ndarray]:
    """Swap of the null vectors ``a`` and ``b'`` (``b`` rescaled so ``<a, b'> = 1``).

    Returns the local swap matrix and ``b'``.
    """
    pair = b.conj() @ form @ a
    b = b / np.conj(pair)
    B = np.column_stack([a, b])
    return B @ _SWAP @ np.linalg.inv(B), b


def vertical_null_basis(B):
    """Null basis ``(x, y)`` of U(1,1) in which a vertical translation is ``[[1, i t], [0, 1]]``.

    ``B = I + i t <., x> x`` with ``t = +-1`` after rescaling ``x``, and
    ``<x, y> = 1``.

    Returns
    -------
    (x, y, t)
    """
    J2 = np.diag([-1.0, 1.0]).astype(complex)
    N = B - np.eye(2)
    Ul, _, _ = np.linalg.svd(N)
    x = Ul[:, 0]
    alpha = x.conj() @ N @ (J2 @ x)  # N y = alpha <y, x> x
    t = float(np.sign(alpha.imag)) or 1.0
    x = x * np.sqrt(abs(alpha))
    y = J2 @ x / np.vdot(x, x).real
    return x, y, t


def nonvertical_chain_basis(B):
    """Chain ``(v, N v, N^2 v)`` of ``N = log B`` with ``<N v, v> = 0``.

    In this basis ``N`` is the real shift matrix and the Gram matrix is real.
    """
    J3 = np.diag([-1.0, 1.0, 1.0]).astype(complex)
    D = B - np.eye(3)
    N = D - D @ D / 2
    _, _, Vh = np.linalg.svd(N @ N)
    v = Vh[0].conj()
    Nv = N @ v
    b = (v.conj() @ J3 @ Nv).imag  # <Nv, v> = i b
    a = (Nv.conj() @ J3 @ Nv).real
    v = v + 1j * (b / (2 * a)) * Nv
    e = N @ v
    return v, e, N @ e


def vertical_block_involutions(B) -> list[np.ndarray]:
    """Four involutions of U(1,1) whose product is a vertical translation.

    ``B`` is ``2 x 2`` with ``(B - I)^2 = 0`` for the form ``diag(-1, 1)``,
    so ``B = I + i t <., x> x`` with ``x`` null and ``t`` real.  With ``y``
    null, ``<x, y> = 1`` put ``p = (i/2) x + y``, ``q = x/2 + i y`` (null,
    ``<p, q> = 1``) and ``E = diag(r, 1/r)`` on ``(p, q)``, ``r = 1/2`` for
    ``t > 0`` and ``r = 2`` for ``t < 0``.  Then ``g = B E^{-1}`` has trace 4
    and is hyperbolic, so ``g`` and ``E`` are each a product of two
    involutions (swap of their null eigenvectors, times the element).

    Returns
    -------
    list of ndarray
        ``[tau_g, sigma_g, tau_E, sigma_E]`` with product ``B``.
    """
    J2 = np.diag([-1.0, 1.0]).astype(complex)
    x, y, t = vertical_null_basis(B)
    p = 0.5j * x + y
    q = 0.5 * x + 1j * y
    P = np.column_stack([p, q])
    r = 0.5 if t > 0 else 2.0
    E = P @ np.diag([r, 1 / r]) @ np.linalg.inv(P)
    sigma_E = P @ _SWAP @ np.linalg.inv(P)
    g = B @ np.linalg.inv(E)
    w, V = np.linalg.eig(g)
    order = np.argsort(-np.abs(w))
    sigma_g, _ = _null_swap(V[:, order[0]], V[:, order[1]], J2)
    return [g @ sigma_g, sigma_g, E @ sigma_E, sigma_E]


def nonvertical_block_involutions(B) -> list[np.ndarray]:
    """Two involutions of U(2,1) whose product is a non-vertical translation.

    With ``N = log B`` (form-skew, ``N^3 = 0``) pick ``v`` with
    ``N^2 v != 0`` and shift it along ``N v`` until ``<N v, v> = 0``.  The
    reflection ``sigma`` in the space-like vector ``e = N v`` fixes ``v``
    and ``N^2 v`` and negates ``e``, so ``sigma N sigma = -N`` and
    ``sigma B sigma = B^{-1}``.

    Returns
    -------
    list of ndarray
        ``[B sigma, sigma]``.
    """
    I3 = np.eye(3, dtype=complex)
    J3 = np.diag([-1.0, 1.0, 1.0]).astype(complex)
    _, e, _ = nonvertical_chain_basis(B)
    sigma = I3 - 2 * np.outer(e, e.conj()) @ J3 / (e.conj() @ J3 @ e).real
    return [B @ sigma, sigma]


def _frame(T, tols, classification, expected):
    frame = adapted_frame(T, tols, classification)
    got = frame.classification.isometry_class
    if got not in expected:
        raise ClassMismatchError(
            f"expected {' or '.join(c.value for c in expected)}, got {got.value}"
        )
    return frame


def _assemble(T, frame: Frame, lift, local_factors, beyond_paper=False):
    """Map local factors to global ones and drop identity involutions."""
    m = frame.basis.shape[0]
    factors = []
    for mat, tag, k, lam in local_factors:
        if tag is FactorTag.INVOLUTION and np.linalg.norm(mat - np.eye(m)) <= 1e-14 * m:
            continue
        factors.append(Factor(frame.to_global(mat), tag, k, None if lam is None else complex(lam)))
    return Factorization(
        complex(lift),
        tuple(factors),
        np.asarray(T, dtype=complex),
        form="indefinite",
        isometry_class=frame.classification.isometry_class.value,
        beyond_paper=beyond_paper,
    )


def _pad(mats, count, dim):
    return list(mats) + [np.eye(dim, dtype=complex)] * (count - len(mats))


def _tail_involutions(M, tols) -> list[np.ndarray]:
    """At most four involutions of U(m) with product ``M`` (``det M = 1``)."""
    if M.shape[0] == 0:
        return []
    return [f.matrix for f in factor_su(M, tols, determinant_one=False).factors]


def _two_involutions(R, tols):
    """``R = a b`` for reversible unitary ``R`` (any size, including 0)."""
    if R.shape[0] == 0:
        return R, R
    a, b = reversible_to_two_involutions(R, tol=tols).factors
    return a.matrix, b.matrix


def factor_elliptic(T, tol=None, classification: Classification | None = None) -> Factorization:
    """Complex rotation (0-reflection) times at most four involutions.

    In the frame ``x + x^perp`` (``x`` time-like eigenvector, eigenvalue
    ``lambda``), ``T = lambda + M``.  With ``c = det(M)^{1/n}``:
    ``T = c * diag(lambda/c, 1, ..., 1) * (1 + M/c)`` and ``M/c`` in SU(n) is
    split into involutions ``j_i`` of U(n), each bordered as
    ``det(j_i) + j_i`` so that every factor lies in SU(n,1).
    """
    tols = resolve(tol)
    frame = _frame(T, tols, classification, (IsometryClass.ELLIPTIC,))
    n = frame.basis.shape[0] - 1
    lam = frame.head_block[0, 0]
    M = frame.tail_block
    c = _root(np.linalg.det(M), n)
    rot = complex(lam / c)
    local = [(_blocks([[rot]], np.eye(n)), FactorTag.K_REFLECTION, 0, rot)]
    for j in _tail_involutions(M / c, tols):
        eps = np.sign(np.linalg.det(j).real)
        local.append((_blocks([[eps]], j), FactorTag.INVOLUTION, None, None))
    return _assemble(T, frame, c, local)


def factor_hyperbolic(T, tol=None, classification: Classification | None = None) -> Factorization:
    """Complex line-reflection times four involutions.

    On the null-pair plane ``H`` the element is ``e^{i theta} K_H`` with
    ``K_H`` real hyperbolic (eigenvalues ``r``, ``1/r``); ``sigma`` swaps the
    null eigenvectors and ``tau = K_H sigma``.  With ``c = det(M)^{1/(n-1)}``
    for the tail ``M`` and ``(r1, r2) = two_reversible_split(M/c)``:
    ``T = c * D * (1 + a1)(1 + b1)(tau + a2)(sigma + b2)`` where
    ``D = (e^{i theta}/c) on H`` and ``r_i = a_i b_i``.
    """
    tols = resolve(tol)
    frame = _frame(T, tols, classification, (IsometryClass.HYPERBOLIC,))
    m = frame.basis.shape[0]
    n = m - 1
    phase = _unit(frame.classification.null_eigenvalue)
    KH = frame.head_block / phase
    sigma = np.diag([-1.0, 1.0]).astype(complex)  # swaps u = (1,1)/sqrt2 and v = (-1,1)/sqrt2
    tau = KH @ sigma
    M = frame.tail_block
    c = _root(np.linalg.det(M), n - 1) if n > 1 else 1.0 + 0j
    lam = complex(phase / c)
    local = [(_blocks(lam * np.eye(2), np.eye(n - 1)), FactorTag.K_REFLECTION, 1, lam)]
    if n > 1:
        r1, r2 = two_reversible_split(M / c, tols)
        a1, b1 = _two_involutions(r1, tols)
        a2, b2 = _two_involutions(r2, tols)
    else:
        a1 = b1 = a2 = b2 = np.zeros((0, 0), dtype=complex)
    I2 = np.eye(2)
    for mat in (_blocks(I2, a1), _blocks(I2, b1), _blocks(tau, a2), _blocks(sigma, b2)):
        local.append((mat, FactorTag.INVOLUTION, None, None))
    return _assemble(T, frame, c, local, beyond_paper=n <= 2)


def factor_translation(T, tol=None, classification: Classification | None = None) -> Factorization:
    """Involutions only: two for a non-vertical, four for a vertical translation.

    The involutions act on the degenerate block ``U`` and fix ``W``
    pointwise; see `nonvertical_block_involutions` and
    `vertical_block_involutions` for the block constructions.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    m = T.shape[0]
    if np.linalg.norm(T - np.eye(m)) <= tols.residual * np.sqrt(m):
        return Factorization(1.0 + 0j, (), T, isometry_class=IsometryClass.CENTRAL.value)
    frame = _frame(
        T,
        tols,
        classification,
        (IsometryClass.VERTICAL_TRANSLATION, IsometryClass.NON_VERTICAL_TRANSLATION),
    )
    k = frame.head
    B = frame.head_block
    block = vertical_block_involutions(B) if k == 2 else nonvertical_block_involutions(B)
    Iw = np.eye(m - k)
    local = [(_blocks(i, Iw), FactorTag.INVOLUTION, None, None) for i in block]
    return _assemble(T, frame, 1.0, local)


def factor_ellipto_translation(T, tol=None, classification: Classification | None = None) -> Factorization:
    """Complex line-reflection times four involutions.

    ``T = c * D * P`` with ``D = lambda/c on U`` (the line-reflection),
    ``P|U = T|U / lambda`` a vertical translation (four involutions ``i_k``)
    and ``P|W = M/c`` in SU(n-1) (at most four involutions ``r_k``); the
    factors are ``i_k + r_k``.
    """
    tols = resolve(tol)
    frame = _frame(T, tols, classification, (IsometryClass.ELLIPTO_TRANSLATION,))
    m = frame.basis.shape[0]
    lam = frame.classification.null_eigenvalue
    M = frame.tail_block
    c = _root(np.linalg.det(M), m - 2)
    d = complex(lam / c)
    local = [(_blocks(d * np.eye(2), np.eye(m - 2)), FactorTag.K_REFLECTION, 1, d)]
    inv_u = vertical_block_involutions(frame.head_block / lam)
    inv_w = _tail_involutions(M / c, tols)
    count = max(len(inv_u), len(inv_w))
    for iu, iw in zip(_pad(inv_u, count, 2), _pad(inv_w, count, m - 2)):
        local.append((_blocks(iu, iw), FactorTag.INVOLUTION, None, None))
    return _assemble(T, frame, c, local, beyond_paper=m - 2 < 1)


def factor_ellipto_parabolic(T, tol=None, classification: Classification | None = None) -> Factorization:
    """Complex plane-reflection times four involutions.

    ``T = c * K * P`` with ``K = lambda/c on U`` (the plane-reflection),
    ``P|U = i1 i2`` a non-vertical translation and ``P|W = r1 r2`` by
    `two_reversible_split`, ``r_i = a_i b_i``; the involutions are
    ``(i1 + a1)(1 + b1)(i2 + a2)(1 + b2)``.  For ``n = 2`` the space ``W``
    is trivial, ``K = lambda I`` and two involutions remain.
    """
    tols = resolve(tol)
    frame = _frame(T, tols, classification, (IsometryClass.ELLIPTO_PARABOLIC,))
    m = frame.basis.shape[0]
    lam = frame.classification.null_eigenvalue
    M = frame.tail_block
    c = _root(np.linalg.det(M), m - 3)
    d = complex(lam / c)
    local = [(_blocks(d * np.eye(3), np.eye(m - 3)), FactorTag.K_REFLECTION, 2, d)]
    i1, i2 = nonvertical_block_involutions(frame.head_block / lam)
    if m == 3:
        local += [(i1, FactorTag.INVOLUTION, None, None), (i2, FactorTag.INVOLUTION, None, None)]
        return _assemble(T, frame, c, local, beyond_paper=True)
    r1, r2 = two_reversible_split(M / c, tols)
    a1, b1 = _two_involutions(r1, tols)
    a2, b2 = _two_involutions(r2, tols)
    I3 = np.eye(3)
    for mat in (_blocks(i1, a1), _blocks(I3, b1), _blocks(i2, a2), _blocks(I3, b2)):
        local.append((mat, FactorTag.INVOLUTION, None, None))
    return _assemble(T, frame, c, local)


def _swap_pairs_semisimple(T, cls: Classification, space, tols):
    """Involution ``sigma`` with ``sigma T sigma = T^{-1}`` for semisimple ``T``.

    Returns ``None`` when the eigenspaces do not pair up.
    """
    spectrum = cls.spectrum
    m = space.dim
    J = space.form
    cols_from, cols_to = [], []
    used = set()
    evs = list(spectrum)
    for i, ev in enumerate(evs):
        if i in used:
            continue
        lam = ev.value
        if abs(abs(lam) - 1) > tols.modulus:
            partner = 1 / lam  # inverse of a null eigenvalue r e^{it} with real ratio
        else:
            partner = np.conj(lam)
        j = min(range(len(evs)), key=lambda j: abs(evs[j].value - partner))
        if abs(evs[j].value - partner) > spectrum.radius or j in used:
            return None
        used.update({i, j})
        if i == j:
            # real eigenvalue (+-1 on the circle): sigma = identity there
            E = ev.eigenspace
            cols_from.append(E)
            cols_to.append(E)
            continue
        A, B = ev.eigenspace, evs[j].eigenspace
        if A.shape[1] != B.shape[1]:
            return None
        if cls.types[i][0] is EigenvalueType.NULL:
            a, b = A[:, 0], B[:, 0]
            b = b / np.conj(b.conj() @ J @ a)
            cols_from.append(np.column_stack([a, b]))
            cols_to.append(np.column_stack([b, a]))
            continue
        if cls.types[i] != cls.types[j] or cls.types[i][0] is not EigenvalueType.POSITIVE:
            return None
        Ao = orthonormalize_indefinite(A, space, tols.rank)
        Bo = orthonormalize_indefinite(B, space, tols.rank)
        cols_from += [Ao, Bo]
        cols_to += [Bo, Ao]
    F = np.column_stack(cols_from)
    G = np.column_stack(cols_to)
    if F.shape != (m, m):
        return None
    return G @ np.linalg.inv(F)


def strongly_reversible_split_un1(T, tol=None) -> Factorization:
    """``T = I1 I2`` with two involutions of U(n,1).

    For semisimple ``T`` the involution ``sigma = I2`` swaps the eigenspaces
    of ``lambda`` and ``conj(lambda)`` (form-orthonormal bases), swaps the
    null pair ``u``, ``v`` (``<u, v> = 1``) of a hyperbolic element and is the
    identity on the eigenvalues ``+-1``; ``I1 = T sigma``.  If ``T`` itself
    does not pair up, the lift is rescaled by the phase of its time-like or
    null eigenvalue and the scalar is reported in ``lift_scalar``.
    Non-vertical translations are handled by `factor_translation`.

    Raises
    ------
    NotReversibleError
        If no lift of ``T`` has a paired spectrum, or ``T`` is a vertical
        translation or another non-semisimple element.
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    space = HermitianSpace.for_matrix(T)
    cls = classify_isometry(T, tols)
    kind = cls.isometry_class
    if kind is IsometryClass.CENTRAL:
        s = cls.scalar
        I = np.eye(space.dim, dtype=complex)
        return Factorization(s, (Factor(I, FactorTag.INVOLUTION), Factor(I, FactorTag.INVOLUTION)), T,
                             isometry_class=kind.value)
    if kind is IsometryClass.NON_VERTICAL_TRANSLATION:
        return factor_translation(T, tols, cls)
    if kind not in (IsometryClass.ELLIPTIC, IsometryClass.HYPERBOLIC):
        raise NotReversibleError(f"{kind.value} elements are not strongly reversible in U(n,1)")
    lifts = [1.0 + 0j]
    if kind is IsometryClass.HYPERBOLIC:
        lifts.append(_unit(cls.null_eigenvalue))
    else:
        for ev, (etype, _) in zip(cls.spectrum, cls.types):
            if etype in (EigenvalueType.NEGATIVE, EigenvalueType.INDEFINITE):
                lifts.append(_unit(ev.value))
    for c in lifts:
        Tc = T / c
        cls_c = cls if c == 1 else classify_isometry(Tc, tols)
        sigma = _swap_pairs_semisimple(Tc, cls_c, space, tols)
        if sigma is None:
            continue
        tau = Tc @ sigma
        factors = (Factor(tau, FactorTag.INVOLUTION), Factor(sigma, FactorTag.INVOLUTION))
        return Factorization(c, factors, T, isometry_class=kind.value)
    raise NotReversibleError("spectrum is not closed under inversion for any lift of T")


_DISPATCH = {
    IsometryClass.ELLIPTIC: factor_elliptic,
    IsometryClass.HYPERBOLIC: factor_hyperbolic,
    IsometryClass.VERTICAL_TRANSLATION: factor_translation,
    IsometryClass.NON_VERTICAL_TRANSLATION: factor_translation,
    IsometryClass.ELLIPTO_TRANSLATION: factor_ellipto_translation,
    IsometryClass.ELLIPTO_PARABOLIC: factor_ellipto_parabolic,
}

# Reconstruction gate applied to every decomposition, relative to the
# residual tolerance.
GATE_FACTOR = 100.0


def decompose(T, tol=None) -> Factorization:
    """At most four involutions and one complex k-reflection.

    ``k = 0`` for elliptic, ``k = 1`` for hyperbolic and ellipto-translation,
    ``k = 2`` for ellipto-parabolic elements; translations need no
    reflection.  A central element gives an empty factor list with the scalar
    in ``lift_scalar``.

    Raises
    ------
    ConvergenceError
        If the assembled product misses ``T`` by more than
        ``100 * tol.residual`` (the output is never returned unchecked).
    """
    tols = resolve(tol)
    T = as_complex_matrix(T, square=True)
    cls = classify_isometry(T, tols)
    if cls.isometry_class is IsometryClass.CENTRAL:
        return Factorization(cls.scalar, (), T, isometry_class=cls.isometry_class.value)
    fact = _DISPATCH[cls.isometry_class](T, tols, cls)
    if fact.residual > GATE_FACTOR * tols.residual:
        raise ConvergenceError(
            f"{cls.isometry_class.value} factorization misses the target by {fact.residual:.3e}",
            residual=fact.residual,
        )
    return fact
