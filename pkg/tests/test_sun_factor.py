import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SEEDS
from isofactor.errors import (
    NotFormUnitaryError,
    NotReversibleError,
    UnsupportedCaseError,
)
from isofactor.gen import random_reversible_su, random_su
from isofactor.sun_factor import (
    commutator_split,
    factor_su,
    is_reversible_su,
    reversible_to_three_involutions,
    reversible_to_two_involutions,
    two_reversible_split,
    unitary_sqrt_reversible,
)
from isofactor.verify import brute_reversibility, check_factorization


def _eye_err(F):
    return float(np.linalg.norm(F @ F - np.eye(F.shape[0])))


def _unit_err(F):
    return float(np.linalg.norm(F.conj().T @ F - np.eye(F.shape[0])))


def _display_diagonals(lam):
    """R1, R2 written out term by term from the partial products P_k."""
    P = [1.0 + 0j]
    for x in lam:
        P.append(P[-1] * x)
    n = len(lam)
    r1, r2 = [], [1.0 + 0j]
    for j in range(1, n + 1, 2):
        r1 += [P[j], np.conj(P[j])]
    for j in range(2, n + 1, 2):
        r2 += [P[j], np.conj(P[j])]
    return np.array(r1[:n]), np.array(r2[:n])


def _sorted_phases(rng, n):
    """Eigenvalues of a diagonal SU(n) element in increasing phase on [0, 2pi)."""
    while True:
        a = rng.uniform(0, 2 * np.pi, n - 1)
        last = (-a.sum()) % (2 * np.pi)
        a = np.sort(np.append(a, last))
        if np.min(np.diff(a)) > 1e-3:
            return np.exp(1j * a)


# worked examples


def test_is_reversible_examples():
    assert is_reversible_su(np.diag([1j, -1j]))[0]
    a, b = 0.4, 1.3
    assert not is_reversible_su(np.diag(np.exp(1j * np.array([a, b, -(a + b)]))))[0]
    t = np.exp(0.8j)
    assert is_reversible_su(np.diag([1, -1, t, np.conj(t)]))[0]


def test_two_involutions_examples():
    f = reversible_to_two_involutions(np.eye(3))
    assert all(np.allclose(F.matrix, np.eye(3)) for F in f.factors)
    T = np.diag([1j, -1j])
    f = reversible_to_two_involutions(T)
    J1, J2 = (F.matrix for F in f.factors)
    assert np.allclose(J1 @ J2, T, atol=1e-10)
    for F in (J1, J2):
        assert _eye_err(F) < 1e-12 and np.linalg.det(F) == pytest.approx(-1)
    T = np.diag([1j, -1j, 1, -1])
    f = reversible_to_two_involutions(T)
    mats = [F.matrix for F in f.factors]
    assert np.allclose(mats[0] @ mats[1], T, atol=1e-10)


def test_two_involutions_in_su4():
    # det of diag(i, -i, 1, -1) is -1; use (i, -i, -1, -1) in SU(4)
    T = np.diag([1j, -1j, -1, -1])
    f = reversible_to_two_involutions(T)
    for F in f.factors:
        assert _eye_err(F.matrix) < 1e-12 and np.linalg.det(F.matrix) == pytest.approx(1)
    assert f.residual < 1e-12


def test_three_involutions_example():
    t, p = 0.7, 2.2
    T = np.diag(np.exp(1j * np.array([np.pi / 2, -np.pi / 2, t, -t, p, -p])))
    f = reversible_to_three_involutions(T)
    assert len(f.factors) == 3
    for F in f.factors:
        assert _eye_err(F.matrix) < 1e-9 and np.linalg.det(F.matrix) == pytest.approx(1)
    assert f.residual < 1e-9


def test_three_involutions_errors():
    with pytest.raises(UnsupportedCaseError):
        reversible_to_three_involutions(np.diag([1j, -1j]))
    t = 0.7
    with pytest.raises(UnsupportedCaseError):
        reversible_to_three_involutions(np.diag(np.exp(1j * np.array([0, 0, t, -t, 2, -2]))))


def test_two_reversible_example():
    l1, l2 = np.exp(0.3j), np.exp(1.9j)
    lam = np.array([l1, l2, 1 / (l1 * l2)])
    lam = lam[np.argsort(np.angle(lam) % (2 * np.pi))]
    R1, R2 = two_reversible_split(np.diag(lam))
    a, b = lam[0], lam[1]
    assert np.allclose(np.diag(R1), [a, np.conj(a), 1], atol=1e-12)
    assert np.allclose(np.diag(R2), [1, a * b, np.conj(a * b)], atol=1e-12)
    R1, R2 = two_reversible_split(np.eye(4))
    assert np.allclose(R1, np.eye(4)) and np.allclose(R2, np.eye(4))


def test_factor_su_examples():
    assert factor_su(np.eye(4)).factors == ()
    T = random_su(4, 1)
    f = factor_su(T)
    assert len(f.involutions) <= 4 and f.residual <= 1e-8
    with pytest.raises(NotFormUnitaryError):
        factor_su(2 * np.eye(3))
    with pytest.raises(NotFormUnitaryError):
        factor_su(np.diag([1j, 1, 1]))


def test_factor_su_six_needs_five_sometimes():
    counts = {len(factor_su(random_su(6, s)).factors) for s in range(40)}
    assert max(counts) <= 5 and 5 in counts


def test_sqrt_examples():
    assert np.allclose(unitary_sqrt_reversible(np.eye(3)), np.eye(3))
    S = unitary_sqrt_reversible(np.diag([1j, -1j]))
    assert np.allclose(S, np.diag(np.exp([0.25j * np.pi, -0.25j * np.pi])), atol=1e-12)
    with pytest.raises(NotReversibleError):
        unitary_sqrt_reversible(np.diag(np.exp(1j * np.array([0.4, 1.3, -1.7]))))


def test_commutator_examples():
    c = commutator_split(np.eye(3))
    assert np.allclose(c.x, np.eye(3)) and np.allclose(c.y, np.eye(3))
    T = np.diag([-1.0, -1, 1, 1])
    c = commutator_split(T)
    assert np.allclose(unitary_sqrt_reversible(T) @ unitary_sqrt_reversible(T), T)
    assert c.residual < 1e-12


def test_brute_reversibility_examples():
    assert brute_reversibility(np.eye(3))
    assert brute_reversibility(np.diag([1j, -1j]))
    assert not brute_reversibility(np.diag(np.exp([1j, 2j, -3j])))


# invariants


@given(st.integers(2, 8), SEEDS)
def test_factor_su_properties(n, seed):
    T = random_su(n, seed)
    f = factor_su(T)
    bound = 5 if n % 4 == 2 and n > 2 else 4
    assert len(f.factors) <= bound
    for F in f.factors:
        assert _eye_err(F.matrix) <= 1e-9 and _unit_err(F.matrix) <= 1e-9
    assert f.residual <= 1e-8
    # determinant ledger
    det = np.prod([F.det for F in f.factors]) * f.lift_scalar**n
    assert abs(det - np.linalg.det(T)) <= 1e-9
    assert check_factorization(T, f).ok


@given(st.integers(3, 8), SEEDS)
def test_factor_su_stays_in_su(n, seed):
    f = factor_su(random_su(n, seed))
    for F in f.factors:
        assert F.det == pytest.approx(1, abs=1e-9)


@given(st.integers(2, 8), SEEDS)
def test_two_reversible_split_properties(n, seed):
    T = random_su(n, seed)
    R1, R2 = two_reversible_split(T)
    assert np.linalg.norm(R1 @ R2 - T) <= 1e-9
    for R in (R1, R2):
        assert is_reversible_su(R)[0] and brute_reversibility(R, trials=2)
        assert np.linalg.norm(R @ T - T @ R) <= 1e-8
    assert np.min(np.abs(np.linalg.eigvals(R2) - 1)) <= 1e-9


@given(st.integers(2, 8), SEEDS)
def test_two_reversible_split_matches_display(n, seed):
    lam = _sorted_phases(np.random.default_rng(seed), n)
    R1, R2 = two_reversible_split(np.diag(lam))
    r1, r2 = _display_diagonals(lam)
    assert np.max(np.abs(R1 - np.diag(r1))) <= 1e-12
    assert np.max(np.abs(R2 - np.diag(r2))) <= 1e-12


@given(st.integers(2, 8), SEEDS)
def test_commutator_on_reversible(n, seed):
    T = random_reversible_su(n, seed)
    assert is_reversible_su(T)[0]
    S = unitary_sqrt_reversible(T)
    assert np.linalg.norm(S @ S - T) <= 1e-9 and is_reversible_su(S)[0]
    assert abs(np.linalg.det(S) - 1) <= 1e-9
    assert commutator_split(T).residual <= 1e-8


@given(st.integers(2, 8), SEEDS)
def test_reversible_split_directly(n, seed):
    T = random_reversible_su(n, seed)
    f = factor_su(T)
    assert len(f.factors) <= (3 if n % 4 == 2 and n > 2 else 2)
    assert f.residual <= 1e-9
