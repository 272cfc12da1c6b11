import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SEEDS, UN1_CLASSES, class_and_n, form_residual, sign_form
from isofactor.classify import IsometryClass, reflection_kind
from isofactor.errors import ClassMismatchError, NotReversibleError
from isofactor.factorization import FactorTag
from isofactor.forms import HermitianSpace
from isofactor.gen import GenSpec, generate, random_involution
from isofactor.spectral import expm, unitary_log_sample
from isofactor.un1_factor import (
    decompose,
    factor_elliptic,
    factor_ellipto_parabolic,
    factor_ellipto_translation,
    factor_hyperbolic,
    factor_translation,
    hermitian_witness,
    strongly_reversible_split_un1,
)
from isofactor.verify import EXPECTED_K, check_factorization

NULL = np.eye(2) / np.sqrt(2) + np.array([[0, -1], [1, 0]]) / np.sqrt(2)  # columns u, v


def _null_frame(m):
    P = np.eye(m, dtype=complex)
    P[:2, :2] = NULL
    return P


def _hermitian_isometry(seed, n):
    """exp of a Hermitian generator anticommuting with J: Hermitian and form-unitary."""
    r = np.random.default_rng(seed)
    b = r.standard_normal(n) + 1j * r.standard_normal(n)
    X = np.zeros((n + 1, n + 1), dtype=complex)
    X[1:, 0] = b
    X[0, 1:] = b.conj()
    return expm(X)


def _involution_err(F):
    return float(np.linalg.norm(F @ F - np.eye(F.shape[0])))


# hermitian witness


def test_witness_examples():
    J = sign_form(3)
    assert np.allclose(hermitian_witness(J).matrix, np.eye(3))
    assert np.allclose(hermitian_witness(np.eye(3)).matrix, J)
    w = hermitian_witness(np.diag([np.exp(0.7j), 1, 1]))
    assert not w and w.matrix is None and w.defect > 1e-4


@given(st.integers(1, 4), SEEDS)
def test_witness_iff_involution(n, seed):
    A = random_involution(n, seed)
    w = hermitian_witness(A)
    assert w and np.allclose(w.matrix @ sign_form(n + 1), A, atol=1e-9)
    T = generate(GenSpec("elliptic", n, seed)).matrix
    assert not hermitian_witness(T)


@given(st.integers(1, 4), SEEDS)
def test_hermitian_isometry_corollary(n, seed):
    A = _hermitian_isometry(seed, n)
    J = sign_form(n + 1)
    assert form_residual(A) < 1e-9 and np.allclose(A, A.conj().T)
    AJ = A @ J
    assert _involution_err(AJ) < 1e-9 and form_residual(AJ) < 1e-9
    assert np.allclose(AJ @ J, A)


# strongly reversible


def test_strongly_reversible_examples():
    J = sign_form(3)
    f = strongly_reversible_split_un1(J)
    tau, sigma = (F.matrix for F in f.factors)
    assert np.allclose(tau, J) and np.allclose(sigma, np.eye(3))
    P = _null_frame(4)
    r = 2.5
    T = P @ np.diag([r, 1 / r, np.exp(0.4j), np.exp(-0.4j)]) @ np.linalg.inv(P)
    tau, sigma = (F.matrix for F in strongly_reversible_split_un1(T).factors)
    u, v = P[:, 0], P[:, 1]
    assert np.allclose(tau @ u, v / r) and np.allclose(tau @ v, r * u)
    assert _involution_err(tau) < 1e-12


def test_vertical_translation_is_not_strongly_reversible():
    with pytest.raises(NotReversibleError):
        strongly_reversible_split_un1(generate(GenSpec("vertical_translation", 2, 0)).matrix)


@given(st.integers(1, 4), SEEDS)
def test_strongly_reversible_self_conjugate_elliptic(n, seed):
    r = np.random.default_rng(seed)
    t = r.uniform(0.2, 3.0, n // 2)
    D = np.concatenate([[1.0], np.exp(1j * t), np.exp(-1j * t), np.ones(n - 2 * (n // 2))])
    P = unitary_log_sample(HermitianSpace(n), seed, 0.5)
    T = P @ np.diag(D) @ np.linalg.inv(P)
    f = strongly_reversible_split_un1(T)
    assert f.residual <= 1e-8
    assert all(_involution_err(F.matrix) <= 1e-9 for F in f.factors)


# per-class constructions


def test_elliptic_examples():
    lam = np.exp(0.9j)
    f = factor_elliptic(np.diag([lam, 1, 1, 1]))
    assert len(f.factors) == 1 and f.reflection.k == 0
    T = np.diag([lam, 1j, -1j, 1, 1, 1, 1])
    f = factor_elliptic(T)
    assert f.residual <= 1e-8
    for F in f.involutions:
        assert F.det == pytest.approx(1)
    with pytest.raises(ClassMismatchError):
        factor_elliptic(generate(GenSpec("hyperbolic", 2, 0)).matrix)


def test_hyperbolic_examples():
    P = _null_frame(4)
    f = factor_hyperbolic(P @ np.diag([3, 1 / 3, 1, 1]) @ np.linalg.inv(P))
    assert np.allclose(f.reflection.matrix, np.eye(4)) and len(f.involutions) <= 4
    lam = np.exp(1j * np.pi / 5)
    f = factor_hyperbolic(P @ np.diag([2 * lam, lam / 2, 1, 1]) @ np.linalg.inv(P))
    assert f.reflection.k == 1 and f.reflection.lam == pytest.approx(lam)
    assert f.residual <= 1e-8 and len(f.involutions) <= 4
    f = factor_hyperbolic(generate(GenSpec("hyperbolic", 2, 4)).matrix)
    assert f.beyond_paper and f.residual <= 1e-8


def test_translation_examples():
    assert factor_translation(np.eye(3)).factors == ()
    f = factor_translation(generate(GenSpec("non_vertical_translation", 3, 0)).matrix)
    assert len(f.involutions) == 2 and f.residual <= 1e-8
    B = np.eye(3, dtype=complex)
    B[0, 1] = 1j
    P = _null_frame(3)
    f = factor_translation(P @ B @ np.linalg.inv(P))
    assert len(f.involutions) <= 4 and f.residual <= 1e-8


def test_ellipto_examples():
    f = factor_ellipto_translation(generate(GenSpec("ellipto_translation", 3, 2)).matrix)
    assert f.reflection.k == 1 and len(f.involutions) <= 4 and f.residual <= 1e-8
    f = factor_ellipto_parabolic(generate(GenSpec("ellipto_parabolic", 3, 2)).matrix)
    assert f.reflection.k == 2 and len(f.involutions) <= 4 and f.residual <= 1e-8
    # the unipotent parts alone need involutions only
    for cls in ("vertical_translation", "non_vertical_translation"):
        f = decompose(generate(GenSpec(cls, 3, 2)).matrix)
        assert f.reflection is None and len(f.involutions) <= 4


@pytest.mark.parametrize("seed", range(5))
def test_ellipto_parabolic_n2(seed):
    # a non-vertical Jordan block times a phase: W is trivial and K is scalar
    T = generate(GenSpec("non_vertical_translation", 2, seed)).matrix * np.exp(0.6j)
    f = factor_ellipto_parabolic(T)
    assert f.beyond_paper and f.reflection.k == 2 and len(f.involutions) == 2
    assert np.allclose(f.reflection.matrix, np.exp(0.6j) * np.eye(3))
    assert f.residual <= 1e-9 and check_factorization(T, f).ok


def test_central():
    f = decompose(np.exp(0.5j) * np.eye(3))
    assert f.lift_scalar == pytest.approx(np.exp(0.5j)) and f.factors == ()


# invariants


@given(class_and_n(), SEEDS)
def test_decompose_table(cn, seed):
    cls, n = cn
    T = generate(GenSpec(cls, n, seed)).matrix
    f = decompose(T)
    kind = IsometryClass(cls)
    assert len(f.involutions) <= 4
    want = EXPECTED_K[kind]
    if want is None:
        assert f.reflection is None
    else:
        assert f.reflection is not None and f.reflection.k == want
        rk = reflection_kind(f.reflection.matrix)
        assert rk.is_k_reflection and rk.k in (want, 0)
    for F in f.factors:
        assert form_residual(F.matrix) <= 1e-9
        if F.tag is FactorTag.INVOLUTION:
            assert _involution_err(F.matrix) <= 1e-9
    assert f.residual <= 1e-7
    assert check_factorization(T, f).ok


@given(class_and_n(), SEEDS, st.floats(0, 2 * np.pi))
def test_projective_soundness(cn, seed, phi):
    cls, n = cn
    T = generate(GenSpec(cls, n, seed)).matrix
    a = decompose(T).product()
    b = decompose(np.exp(1j * phi) * T).product()
    ratio = b @ np.linalg.inv(a)
    c = np.trace(ratio) / (n + 1)
    assert abs(abs(c) - 1) <= 1e-8
    assert np.linalg.norm(ratio - c * np.eye(n + 1)) <= 1e-7


@given(st.sampled_from(UN1_CLASSES), SEEDS)
def test_decompose_is_deterministic(cls, seed):
    n = 3
    T = generate(GenSpec(cls, n, seed)).matrix
    a, b = decompose(T), decompose(T)
    assert all(x.matrix.tobytes() == y.matrix.tobytes() for x, y in zip(a.factors, b.factors))
