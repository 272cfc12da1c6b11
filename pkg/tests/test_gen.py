import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SEEDS, class_and_n, form_residual
from isofactor.classify import classify_isometry
from isofactor.gen import (
    CLASS_NAMES,
    GenSpec,
    generate,
    random_involution,
    random_reversible_su,
    random_su,
)
from isofactor.sun_factor import is_reversible_su


def test_elliptic_example():
    T = generate(GenSpec("elliptic", 2, 1)).matrix
    assert classify_isometry(T).isometry_class.value == "elliptic"


def test_unconjugated_hyperbolic_eigenvalues():
    T = generate(GenSpec("hyperbolic", 3, 0, r=2.0, theta=0.0, conjugate=False)).matrix
    lam = np.linalg.eigvals(T)
    assert np.min(np.abs(lam - 2)) < 1e-12 and np.min(np.abs(lam - 0.5)) < 1e-12


def test_su_n_det():
    T = generate(GenSpec("su_n", 6, 9)).matrix
    assert abs(np.linalg.det(T) - 1) < 1e-10
    assert np.allclose(T.conj().T @ T, np.eye(6), atol=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [dict(cls="loxodromic", n=2, seed=0), dict(cls="elliptic", n=0, seed=0), dict(cls="hyperbolic", n=2, seed=0, r=0.5)],
)
def test_bad_specs(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)


def test_label_json():
    out = generate(GenSpec("vertical_translation", 2, 3)).to_json()
    assert out["label"] == {"class": "vertical_translation", "n": 2, "seed": 3}
    assert out["rows"] == out["cols"] == 3


def test_class_names():
    assert "su_n" in CLASS_NAMES and len(CLASS_NAMES) == 8


@given(class_and_n(), SEEDS)
def test_bitwise_determinism(cn, seed):
    cls, n = cn
    a = generate(GenSpec(cls, n, seed)).matrix
    b = generate(GenSpec(cls, n, seed)).matrix
    assert a.tobytes() == b.tobytes()
    assert form_residual(a) < 1e-12


@given(class_and_n(), SEEDS)
def test_seeds_differ(cn, seed):
    cls, n = cn
    if cls == "central":
        return
    a = generate(GenSpec(cls, n, seed)).matrix
    b = generate(GenSpec(cls, n, seed + 1)).matrix
    assert not np.allclose(a, b)


@given(st.integers(2, 8), SEEDS, st.one_of(st.none(), st.booleans()))
def test_random_reversible_su(n, seed, with_fixed):
    if with_fixed is False and n % 2:
        with pytest.raises(ValueError):
            random_reversible_su(n, seed, with_fixed)
        return
    T = random_reversible_su(n, seed, with_fixed)
    assert abs(np.linalg.det(T) - 1) < 1e-10
    ok, pairing = is_reversible_su(T)
    assert ok
    if with_fixed is False:
        assert not pairing.fixed


@given(st.integers(1, 4), SEEDS)
def test_random_involution(n, seed):
    A = random_involution(n, seed)
    assert np.linalg.norm(A @ A - np.eye(n + 1)) < 1e-9
    assert form_residual(A) < 1e-9
    assert classify_isometry(A).isometry_class.value != "central"


@given(st.integers(1, 8), SEEDS)
def test_random_su(n, seed):
    T = random_su(n, seed)
    assert abs(np.linalg.det(T) - 1) < 1e-10
