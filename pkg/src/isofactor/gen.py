"""Seeded ground-truth generators.

Each class is built in its normal form on the null pair
``u = (e_0 + e_1)/sqrt 2``, ``v = (e_1 - e_0)/sqrt 2`` (so ``<u, v> = 1``) and
then conjugated by a moderately conditioned element of U(n,1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import IsometryClass
from .forms import HermitianSpace, form_inverse
from .jsonio import matrix_to_json
from .rng import stream
from .spectral import expm, random_anti_hermitian, unitary_log_sample

__all__ = [
    "GenSpec",
    "Generated",
    "generate",
    "random_su",
    "random_reversible_su",
    "random_involution",
    "CLASS_NAMES",
    "min_n",
]

SU_N = "su_n"
CLASS_NAMES = tuple(c.value for c in IsometryClass) + (SU_N,)
# Distinct phases are kept at least this far apart (radians).
PHASE_GAP = 0.1

_MIN_N = {
    IsometryClass.NON_VERTICAL_TRANSLATION: 2,
    IsometryClass.ELLIPTO_TRANSLATION: 2,
    IsometryClass.VERTICAL_TRANSLATION: 2,
    IsometryClass.ELLIPTO_PARABOLIC: 3,
}


def min_n(cls) -> int:
    """Smallest supported ``n`` for a class name."""
    if cls == SU_N:
        return 2
    return _MIN_N.get(IsometryClass(cls), 1)


@dataclass(frozen=True)
class GenSpec:
    """What to generate.

    Attributes
    ----------
    cls : str
        An `IsometryClass` value or ``"su_n"``.
    n : int
        Hyperbolic dimension (matrix size ``n + 1``); for ``su_n`` the
        matrix size itself.
    seed : int
    r : float, optional
        Modulus of the expanding null eigenvalue (hyperbolic).
    theta : float, optional
        Phase of the null eigenvalue(s) or of the time-like eigenvalue.
    conjugate : bool
        Conjugate the normal form by a random element of U(n,1).
    """

    cls: str
    n: int
    seed: int
    r: float | None = None
    theta: float | None = None
    conjugate: bool = True

    def __post_init__(self):
        if self.cls not in CLASS_NAMES:
            raise ValueError(f"unknown class {self.cls!r}; expected one of {', '.join(CLASS_NAMES)}")
        if int(self.n) != self.n or self.n < min_n(self.cls):
            raise ValueError(f"class {self.cls} needs n >= {min_n(self.cls)}, got {self.n}")
        if self.r is not None and not self.r > 1:
            raise ValueError("r must exceed 1")


@dataclass(frozen=True)
class Generated:
    matrix: np.ndarray = field(repr=False)
    label: str
    spec: GenSpec

    def to_json(self) -> dict:
        out = matrix_to_json(self.matrix)
        out["label"] = {"class": self.label, "n": self.spec.n, "seed": self.spec.seed}
        return out


def _separated_phases(rng, count: int, avoid=()) -> np.ndarray:
    """``count`` phases in [0, 2pi) pairwise (and from ``avoid``) >= PHASE_GAP apart on the circle."""
    chosen = [float(a) % (2 * np.pi) for a in avoid]
    out = []
    while len(out) < count:
        a = float(rng.uniform(0.0, 2 * np.pi))
        if all(abs(np.angle(np.exp(1j * (a - b)))) >= PHASE_GAP for b in chosen):
            chosen.append(a)
            out.append(a)
    return np.array(out)


def _null_frame(m: int) -> np.ndarray:
    """Columns ``u, v, e_2, ..., e_n`` with ``<u, v> = 1``."""
    P = np.eye(m, dtype=complex)
    s = 1 / np.sqrt(2)
    P[:2, :2] = [[s, -s], [s, s]]
    return P


def _normal_form(spec: GenSpec, rng) -> np.ndarray:
    m = spec.n + 1
    cls = IsometryClass(spec.cls)
    P = _null_frame(m)
    Pinv = np.linalg.inv(P)
    if cls is IsometryClass.CENTRAL:
        phi = spec.theta if spec.theta is not None else rng.uniform(0, 2 * np.pi)
        return np.exp(1j * phi) * np.eye(m)
    if cls is IsometryClass.ELLIPTIC:
        avoid = () if spec.theta is None else (spec.theta,)
        phases = _separated_phases(rng, m - len(avoid), avoid)
        if spec.theta is not None:
            phases = np.concatenate([[spec.theta], phases])
        return np.diag(np.exp(1j * phases))
    if cls is IsometryClass.HYPERBOLIC:
        r = spec.r if spec.r is not None else float(rng.uniform(1.5, 3.0))
        theta = spec.theta if spec.theta is not None else float(rng.uniform(0, 2 * np.pi))
        rest = _separated_phases(rng, m - 2)
        D = np.diag(np.concatenate([[r * np.exp(1j * theta), np.exp(1j * theta) / r], np.exp(1j * rest)]))
        return P @ D @ Pinv
    # parabolic classes: unipotent block on U, commuting elliptic factor
    J = HermitianSpace(spec.n).form
    u = P[:, 0]
    s = float(rng.uniform(0.5, 2.0)) * rng.choice([-1.0, 1.0])
    vertical = 1j * s * np.outer(u, u.conj()) @ J
    if cls in (IsometryClass.VERTICAL_TRANSLATION, IsometryClass.ELLIPTO_TRANSLATION):
        N = np.eye(m) + vertical
        k = 2
    else:
        w = np.zeros(m)
        w[2] = 1.0
        X = np.outer(u, w) @ J - np.outer(w, u.conj()) @ J
        X = X * float(rng.uniform(0.5, 2.0)) + vertical
        N = expm(X)
        k = 3
    if cls.unipotent:
        return N
    phi = spec.theta if spec.theta is not None else float(rng.uniform(0, 2 * np.pi))
    rest = _separated_phases(rng, m - k, avoid=(phi,))
    E = np.diag(np.concatenate([np.full(k, np.exp(1j * phi)), np.exp(1j * rest)]))
    # E is diagonal in the frame (u, v, e_2, ...), and U = span of the first k frame vectors
    return (P @ E @ Pinv) @ N


def random_su(n: int, seed: int, norm: float = 3.0, purpose="su_n") -> np.ndarray:
    """``exp(K)`` for a seeded traceless anti-Hermitian ``K`` with ``|K|_2 = norm``."""
    K = random_anti_hermitian(stream(seed, purpose), n, norm, traceless=True)
    return expm(K)


def random_reversible_su(n: int, seed: int, with_fixed: bool | None = None) -> np.ndarray:
    """Seeded reversible element of SU(n): conjugation-closed spectrum, det 1.

    ``with_fixed`` forces (``True``) or forbids (``False``) eigenvalues ``+-1``;
    by default a coin decides when ``n`` is even.  The number of ``-1``
    eigenvalues is always even.
    """
    rng = stream(seed, "reversible_su")
    if with_fixed is None:
        with_fixed = bool(n % 2) or bool(rng.integers(2))
    if not with_fixed and n % 2:
        raise ValueError("odd n forces a fixed eigenvalue")
    pairs = n // 2 if not with_fixed else int(rng.integers(0, n // 2 + 1 if n % 2 else n // 2))
    fixed = n - 2 * pairs
    angles = _separated_phases(rng, pairs) % np.pi
    angles = np.where(angles < PHASE_GAP / 2, angles + PHASE_GAP, angles)
    diag = list(np.exp(1j * angles)) + list(np.exp(-1j * angles))
    minus = int(rng.integers(0, fixed // 2 + 1)) * 2 if fixed else 0
    diag += [-1.0] * minus + [1.0] * (fixed - minus)
    Q = expm(random_anti_hermitian(stream(seed, "reversible_su_basis"), n, 2.0))
    return Q @ np.diag(diag) @ Q.conj().T


def generate(spec: GenSpec) -> Generated:
    """Build the element described by ``spec`` (bitwise deterministic)."""
    if spec.cls == SU_N:
        return Generated(random_su(spec.n, spec.seed), SU_N, spec)
    rng = stream(spec.seed, ("gen", spec.cls, spec.n))
    T = _normal_form(spec, rng)
    if spec.conjugate:
        space = HermitianSpace(spec.n)
        scale = float(stream(spec.seed, ("gen-scale", spec.cls, spec.n)).uniform(0.2, 1.0))
        g = unitary_log_sample(space, spec.seed, scale, purpose=("gen-conj", spec.cls, spec.n))
        T = g @ T @ form_inverse(g, space)
    return Generated(T, spec.cls, spec)


def random_involution(n: int, seed: int) -> np.ndarray:
    """Seeded involution of U(n,1): ``g diag(+-1) g^{-1}`` with mixed signs.

    Every involution of U(n,1) has this shape: its eigenspaces are
    orthogonal, so a form-orthonormal eigenbasis exists.
    """
    rng = stream(seed, "involution")
    signs = rng.choice([-1.0, 1.0], size=n + 1)
    if np.all(signs == signs[0]):
        # +-I would be central; mix the signs
        signs[int(rng.integers(n + 1))] *= -1
    space = HermitianSpace(n)
    g = unitary_log_sample(space, seed, float(rng.uniform(0.2, 1.0)), purpose="involution-conj")
    return g @ np.diag(signs) @ form_inverse(g, space)
