import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from isofactor.gen import CLASS_NAMES, min_n

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

UN1_CLASSES = [c for c in CLASS_NAMES if c != "su_n"]
SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def class_and_n(draw, max_n=4, classes=None):
    """A class name and a supported dimension."""
    cls = draw(st.sampled_from(classes or UN1_CLASSES))
    n = draw(st.integers(min_value=min_n(cls), max_value=max(max_n, min_n(cls))))
    return cls, n


def sign_form(m):
    J = np.eye(m)
    J[0, 0] = -1.0
    return J


def form_residual(A):
    J = sign_form(A.shape[0])
    return float(np.linalg.norm(A.conj().T @ J @ A - J) / np.linalg.norm(J))


def rel(A, B):
    return float(np.linalg.norm(A - B) / np.linalg.norm(B))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
