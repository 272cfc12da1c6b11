"""Involution factorizations inside SU(n) (Euclidean Hermitian form).

Every construction works in an orthonormal eigenbasis ``Q`` of the unitary
input: the Schur form of a normal matrix is diagonal, so ``Q`` comes straight
out of `spectral.schur`.  Factors are assembled as ``Q F Q^H`` with ``F``
block diagonal in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionError,
    NotFormUnitaryError,
    NotReversibleError,
    UnsupportedCaseError,
)
from .factorization import Commutator, Factor, Factorization, FactorTag
from .forms import as_complex_matrix
from .spectral import schur
from .tolerances import Tolerances, resolve

__all__ = [
    "EigenPairing",
    "unitary_eigenbasis",
    "is_reversible_su",
    "reversible_to_two_involutions",
    "reversible_to_three_involutions",
    "two_reversible_split",
    "factor_su",
    "unitary_sqrt_reversible",
    "commutator_split",
]

PAIRING_TOL = 1e-7


@dataclass(frozen=True)
class EigenPairing:
    """Pairing of the eigenvalues ``lambda`` and ``conj(lambda)``.

    Attributes
    ----------
    values : ndarray
        Eigenvalues, aligned with the columns of ``basis``.
    basis : ndarray
        Orthonormal eigenbasis.
    pairs : tuple of (int, int)
        ``values[b]`` is (numerically) ``conj(values[a])``.
    fixed : tuple of int
        Indices of the eigenvalues ``+1`` and ``-1``.
    unpaired : tuple of int
        Indices left over; empty iff the spectrum is conjugation closed.
    """

    values: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    pairs: tuple
    fixed: tuple
    unpaired: tuple = ()

    @property
    def reversible(self) -> bool:
        return not self.unpaired

    @property
    def minus_ones(self) -> tuple:
        return tuple(i for i in self.fixed if self.values[i].real < 0)


def _check_unitary(T, tol: Tolerances, special: bool = True):
    T = as_complex_matrix(T, square=True)
    m = T.shape[0]
    res = float(np.linalg.norm(T.conj().T @ T - np.eye(m)) / np.sqrt(m))
    if res > 10 * tol.residual:
        raise NotFormUnitaryError(f"matrix is not unitary (residual {res:.3e})", residual=res)
    if special:
        det = np.linalg.det(T)
        if abs(det - 1) > tol.rank:
            raise NotFormUnitaryError(f"determinant {det:.6g} is not 1")
    return T


def unitary_eigenbasis(T):
    """Eigenvalues and orthonormal eigenvectors of a unitary matrix.

    Eigenvalues are projected to the unit circle and sorted by phase in
    ``[0, 2 pi)``.
    """
    Q, U = schur(T)
    d = np.diag(U).copy()
    d = d / np.abs(d)
    order = np.argsort(np.angle(d) % (2 * np.pi), kind="stable")
    return d[order], Q[:, order]


def _pairing(values, basis, tol: float) -> EigenPairing:
    m = len(values)
    fixed = [i for i in range(m) if min(abs(values[i] - 1), abs(values[i] + 1)) <= tol]
    free = [i for i in range(m) if i not in fixed]
    taken = set()
    pairs, unpaired = [], []
    for i in free:
        if i in taken:
            continue
        taken.add(i)
        target = np.conj(values[i])
        cands = [j for j in free if j not in taken]
        if cands:
            j = min(cands, key=lambda j: (abs(values[j] - target), j))
            if abs(values[j] - target) <= tol:
                taken.add(j)
                pairs.append((i, j))
                continue
        unpaired.append(i)
    return EigenPairing(values, basis, tuple(pairs), tuple(fixed), tuple(unpaired))


def is_reversible_su(T, tol=None):
    """Test whether the spectrum of a unitary ``T`` is closed under conjugation.

    Returns
    -------
    (bool, EigenPairing)
        Pairs are matched greedily in phase order, nearest conjugate first,
        within ``1e-7``; eigenvalues ``+-1`` go to ``fixed``.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols, special=False)
    values, basis = unitary_eigenbasis(T)
    pairing = _pairing(values, basis, PAIRING_TOL)
    return pairing.reversible, pairing


def _in_basis(basis, local):
    return basis @ local @ basis.conj().T


def _two_involution_blocks(pairing: EigenPairing, flip_fixed: bool = True):
    """Local matrices ``(J1, J2)`` with ``diag(values) = J2 J1``."""
    m = len(pairing.values)
    J1 = np.zeros((m, m), dtype=complex)
    J2 = np.zeros((m, m), dtype=complex)
    for a, b in pairing.pairs:
        lam = pairing.values[a]
        J1[b, a] = lam
        J1[a, b] = np.conj(lam)
        J2[a, b] = J2[b, a] = 1.0
    for i in pairing.fixed:
        if pairing.values[i].real < 0:
            J1[i, i], J2[i, i] = -1.0, 1.0
        else:
            J1[i, i] = J2[i, i] = 1.0
    if flip_fixed and len(pairing.pairs) % 2 == 1 and pairing.fixed:
        # each pair block has det -1 in both factors; move the sign onto a fixed vector
        i = pairing.fixed[0]
        J1[i, i] = -J1[i, i]
        J2[i, i] = -J2[i, i]
    return J1, J2


def _resolve_pairing(T, pairing, tols):
    if pairing is None:
        ok, pairing = is_reversible_su(T, tols)
    if not pairing.reversible:
        raise NotReversibleError(
            "spectrum is not closed under conjugation: unmatched "
            + ", ".join(f"{pairing.values[i]:.6g}" for i in pairing.unpaired)
        )
    return pairing


def _involution(M) -> Factor:
    return Factor(M, FactorTag.INVOLUTION)


def reversible_to_two_involutions(T, pairing: EigenPairing | None = None, tol=None) -> Factorization:
    """``T = J2 J1`` for a reversible unitary ``T``.

    On each paired plane ``span{w1, w2}`` (eigenvalues ``lambda``,
    ``conj(lambda)``) ``J1`` maps ``w1 -> lambda w2``, ``w2 -> conj(lambda) w1``
    and ``J2`` swaps ``w1``, ``w2``; ``+1`` eigenvectors are fixed by both,
    ``-1`` eigenvectors are negated by ``J1``.  With an odd number of pairs
    one fixed vector is negated in both factors so that both land in SU(n).
    Without fixed vectors and with an odd number of pairs (``n = 2 mod 4``)
    both factors have determinant ``-1``.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols, special=False)
    pairing = _resolve_pairing(T, pairing, tols)
    J1, J2 = _two_involution_blocks(pairing)
    Q = pairing.basis
    factors = (_involution(_in_basis(Q, J2)), _involution(_in_basis(Q, J1)))
    return Factorization(1.0 + 0j, factors, T, form="definite")


def reversible_to_three_involutions(T, pairing: EigenPairing | None = None, tol=None) -> Factorization:
    """``T = I1 I2 I3`` with three involutions of determinant 1.

    For ``n = 2 mod 4``, ``n > 2`` and no eigenvalue ``+-1``: with
    ``T|W_i = A_i B_i`` on the paired planes (both of determinant -1),
    ``I1 = A_1 + 1 + A_i``, ``I2 = 1 + A_2 + B_i``, ``I3 = B_1 + B_2 + 1``
    (``i >= 3``).
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols, special=False)
    n = T.shape[0]
    if n % 4 != 2 or n <= 2:
        raise UnsupportedCaseError(f"three-involution split needs n = 2 mod 4 and n > 2, got n = {n}")
    pairing = _resolve_pairing(T, pairing, tols)
    if pairing.fixed:
        raise UnsupportedCaseError("T has an eigenvalue +-1; use reversible_to_two_involutions")
    B, A = _two_involution_blocks(pairing, flip_fixed=False)
    I1 = np.eye(n, dtype=complex)
    I2 = np.eye(n, dtype=complex)
    I3 = np.eye(n, dtype=complex)
    for idx, (a, b) in enumerate(pairing.pairs):
        blk = np.ix_([a, b], [a, b])
        if idx == 0:
            I1[blk], I3[blk] = A[blk], B[blk]
        elif idx == 1:
            I2[blk], I3[blk] = A[blk], B[blk]
        else:
            I1[blk], I2[blk] = A[blk], B[blk]
    Q = pairing.basis
    factors = tuple(_involution(_in_basis(Q, M)) for M in (I1, I2, I3))
    return Factorization(1.0 + 0j, factors, T, form="definite")


def _two_reversible_diagonals(values):
    """Diagonals of ``R1``, ``R2`` for eigenvalues ordered as given."""
    n = len(values)
    P = np.cumprod(values)  # P[k-1] = lambda_1 ... lambda_k
    r1 = np.empty(n, dtype=complex)
    r2 = np.empty(n, dtype=complex)
    for i in range(n):
        if i % 2 == 0:
            r1[i] = P[i]
            r2[i] = 1.0 if i == 0 else np.conj(P[i - 1])
        else:
            r1[i] = np.conj(P[i - 1])
            r2[i] = P[i]
    if n % 2 == 0:
        r2[n - 1] = P[n - 1]
    return r1, r2


def two_reversible_split(T, tol=None):
    """``T = R1 R2`` with ``R1``, ``R2`` reversible.

    In the eigenbasis (eigenvalues sorted by phase, ``P_k`` their partial
    products) ``R1 = diag(P_1, conj P_1, P_3, conj P_3, ...)`` and
    ``R2 = diag(1, P_2, conj P_2, P_4, ...)``; the last entry is ``P_n = 1``
    in ``R1`` (odd ``n``) or ``R2`` (even ``n``).  ``R2`` always has the
    eigenvalue 1.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols)
    values, Q = unitary_eigenbasis(T)
    r1, r2 = _two_reversible_diagonals(values)
    return _in_basis(Q, np.diag(r1)), _in_basis(Q, np.diag(r2))


def _split_reversible(R, tols, determinant_one: bool):
    """Involutions for one reversible factor (2, or 3 when forced into SU(n))."""
    n = R.shape[0]
    if np.linalg.norm(R - np.eye(n)) <= tols.residual:
        return []
    _, pairing = is_reversible_su(R, tols)
    pairing = _resolve_pairing(R, pairing, tols)
    needs_three = len(pairing.pairs) % 2 == 1 and not pairing.fixed
    if needs_three and determinant_one and n > 2:
        return list(reversible_to_three_involutions(R, pairing, tols).factors)
    return list(reversible_to_two_involutions(R, pairing, tols).factors)


def factor_su(T, tol=None, determinant_one: bool = True) -> Factorization:
    """Product of at most four (``n = 2 mod 4``: five) involutions.

    A reversible ``T`` is split directly; otherwise ``T = R1 R2`` by
    `two_reversible_split` and each ``R_i`` is split separately.  With
    ``determinant_one=False`` involutions of determinant ``-1`` are allowed,
    which caps the count at four for every ``n``.  For ``n = 2`` the only
    involutions in SU(2) are ``+-I``, so determinant ``-1`` factors are used.

    Raises
    ------
    NotFormUnitaryError
        If ``T`` is not unitary with determinant 1.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols)
    n = T.shape[0]
    if n == 1 or np.linalg.norm(T - np.eye(n)) <= tols.residual:
        return Factorization(1.0 + 0j, (), T, form="definite")
    ok, pairing = is_reversible_su(T, tols)
    if ok:
        factors = _split_reversible(T, tols, determinant_one)
    else:
        R1, R2 = two_reversible_split(T, tols)
        factors = _split_reversible(R1, tols, determinant_one) + _split_reversible(R2, tols, determinant_one)
    return Factorization(1.0 + 0j, tuple(factors), T, form="definite", beyond_paper=(n == 2 and determinant_one))


def unitary_sqrt_reversible(T, tol=None) -> np.ndarray:
    """Reversible ``S`` in SU(n) with ``S^2 = T``, for reversible ``T`` in SU(n).

    A pair ``(lambda, conj lambda)`` lifts to ``(mu, conj mu)`` with ``mu``
    the principal root; ``+1`` lifts to 1 and ``-1`` eigenvalues are lifted
    two at a time to ``(i, -i)``.

    Raises
    ------
    NotReversibleError
        If the spectrum is not conjugation closed, or ``-1`` has odd
        multiplicity so that no root choice balances the determinant.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols)
    _, pairing = is_reversible_su(T, tols)
    pairing = _resolve_pairing(T, pairing, tols)
    minus = pairing.minus_ones
    if len(minus) % 2:
        raise NotReversibleError("eigenvalue -1 has odd multiplicity; no reversible square root in SU(n)")
    roots = np.ones(len(pairing.values), dtype=complex)
    for a, b in pairing.pairs:
        mu = np.exp(0.5j * np.angle(pairing.values[a]))
        roots[a], roots[b] = mu, np.conj(mu)
    for a, b in zip(minus[0::2], minus[1::2]):
        roots[a], roots[b] = 1j, -1j
    return _in_basis(pairing.basis, np.diag(roots))


def commutator_split(T, tol=None) -> Commutator:
    """``T = X Y X^{-1} Y^{-1}`` for reversible ``T`` in SU(n).

    With ``S`` a reversible square root: if ``S = i1 i2`` then
    ``(X, Y) = (i1, i2)``; if ``S = i1 i2 i3`` then ``(X, Y) = (i1 i3, i3 i2)``.
    """
    tols = resolve(tol)
    T = _check_unitary(T, tols)
    n = T.shape[0]
    if n < 2:
        raise DimensionError("commutator_split needs n >= 2")
    S = unitary_sqrt_reversible(T, tols)
    invs = _split_reversible(S, tols, determinant_one=True)
    mats = [f.matrix for f in invs]
    if not mats:
        X = Y = np.eye(n, dtype=complex)
    elif len(mats) == 2:
        X, Y = mats
    else:
        i1, i2, i3 = mats
        X, Y = i1 @ i3, i3 @ i2
    return Commutator(X, Y, T)
