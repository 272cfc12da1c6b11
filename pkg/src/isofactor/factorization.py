"""Factorization records shared by every factorizer.

A factorization states ``target = lift_scalar * F_1 F_2 ... F_m`` where each
``F_i`` acts holomorphically (``v -> F v``) or, for anti-holomorphic
factors, as ``v -> F conj(v)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import MatrixFormatError
from .jsonio import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json

__all__ = ["FactorTag", "Factor", "Factorization", "Commutator", "compose", "factorization_from_json"]


class FactorTag(str, enum.Enum):
    INVOLUTION = "involution"
    K_REFLECTION = "k_reflection"
    REVERSIBLE = "reversible"
    ANTIHOLO_INVOLUTION = "antiholo_involution"


@dataclass(frozen=True)
class Factor:
    """One factor of a factorization.

    Attributes
    ----------
    matrix : ndarray
    tag : FactorTag
    k, lam :
        Reflection data, set only for ``k_reflection`` factors.
    """

    matrix: np.ndarray = field(repr=False)
    tag: FactorTag
    k: int | None = None
    lam: complex | None = None

    @property
    def antiholomorphic(self) -> bool:
        return self.tag is FactorTag.ANTIHOLO_INVOLUTION

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def to_json(self) -> dict:
        out = {"tag": self.tag.value, "det": complex_to_json(self.det), "matrix": matrix_to_json(self.matrix)}
        if self.k is not None:
            out["k"] = self.k
            out["lambda"] = complex_to_json(self.lam)
        return out

    @classmethod
    def from_json(cls, obj) -> "Factor":
        if not isinstance(obj, dict) or "tag" not in obj or "matrix" not in obj:
            raise MatrixFormatError("factor JSON needs 'tag' and 'matrix'")
        try:
            tag = FactorTag(obj["tag"])
        except ValueError:
            raise MatrixFormatError(f"unknown factor tag {obj['tag']!r}") from None
        lam = complex_from_json(obj["lambda"]) if "lambda" in obj else None
        return cls(matrix_from_json(obj["matrix"]), tag, obj.get("k"), lam)


def compose(factors, lift_scalar: complex = 1.0):
    """Matrix and parity of ``lift_scalar * f_1 o f_2 o ... o f_m``.

    Returns
    -------
    (ndarray, bool)
        ``M`` and ``anti``; the composite acts as ``v -> M v`` or, when
        ``anti`` is true, ``v -> M conj(v)``.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("compose needs at least one factor")
    M = None
    anti = False
    for f in factors:
        mat, a = (f.matrix, f.antiholomorphic) if isinstance(f, Factor) else f
        mat = np.asarray(mat, dtype=complex)
        if M is None:
            M = mat.copy()
        else:
            M = M @ (np.conj(mat) if anti else mat)
        anti = anti ^ bool(a)
    return lift_scalar * M, anti


@dataclass(frozen=True)
class Factorization:
    """``target = lift_scalar * F_1 ... F_m``.

    Attributes
    ----------
    lift_scalar : complex
        Unit scalar relating the target to the product.
    factors : tuple of Factor
    target : ndarray
    form : str
        ``"definite"`` (SU(n), Euclidean form) or ``"indefinite"`` (U(n,1)).
    isometry_class : str or None
        Class of the target, for U(n,1) factorizations.
    beyond_paper : bool
        Set when the construction extends a case the source lemmas exclude.
    """

    lift_scalar: complex
    factors: tuple
    target: np.ndarray = field(repr=False)
    form: str = "indefinite"
    isometry_class: str | None = None
    beyond_paper: bool = False

    def __len__(self):
        return len(self.factors)

    @property
    def involutions(self) -> list:
        return [f for f in self.factors if f.tag in (FactorTag.INVOLUTION, FactorTag.ANTIHOLO_INVOLUTION)]

    @property
    def reflection(self) -> Factor | None:
        refl = [f for f in self.factors if f.tag is FactorTag.K_REFLECTION]
        return refl[0] if refl else None

    def product(self) -> np.ndarray:
        """``lift_scalar`` times the composition, as a holomorphic matrix."""
        m = self.target.shape[0]
        if not self.factors:
            return self.lift_scalar * np.eye(m, dtype=complex)
        M, anti = compose(self.factors, self.lift_scalar)
        if anti:
            raise ValueError("factors compose to an anti-holomorphic map")
        return M

    @property
    def residual(self) -> float:
        return float(np.linalg.norm(self.product() - self.target) / max(np.linalg.norm(self.target), 1e-300))

    def to_json(self) -> dict:
        out = {
            "lift_scalar": complex_to_json(self.lift_scalar),
            "factors": [f.to_json() for f in self.factors],
            "residual": self.residual,
            "form": self.form,
            "beyond_paper": self.beyond_paper,
        }
        if self.isometry_class is not None:
            out["class"] = self.isometry_class
        refl = self.reflection
        if refl is not None:
            out["reflection"] = {"k": refl.k, "lambda": complex_to_json(refl.lam)}
        return out


def factorization_from_json(obj, target) -> Factorization:
    """Rebuild a `Factorization` from its JSON against a given target."""
    if not isinstance(obj, dict) or "factors" not in obj:
        raise MatrixFormatError("factorization JSON needs a 'factors' list")
    if not isinstance(obj["factors"], list):
        raise MatrixFormatError("'factors' must be a list")
    lift = complex_from_json(obj.get("lift_scalar", [1.0, 0.0]))
    factors = tuple(Factor.from_json(f) for f in obj["factors"])
    form = obj.get("form", "indefinite")
    if form not in ("definite", "indefinite"):
        raise MatrixFormatError(f"unknown form {form!r}")
    return Factorization(
        lift,
        factors,
        np.asarray(target, dtype=complex),
        form=form,
        isometry_class=obj.get("class"),
        beyond_paper=bool(obj.get("beyond_paper", False)),
    )


@dataclass(frozen=True)
class Commutator:
    """``target = x o y o x^{-1} o y^{-1}``.

    For anti-holomorphic involutions ``x`` and ``y`` the inverses are the
    maps themselves and the commutator is ``x o y o x o y``.
    """

    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    target: np.ndarray = field(repr=False)
    antiholomorphic: bool = False

    def product(self) -> np.ndarray:
        if self.antiholomorphic:
            M, _ = compose([(self.x, True), (self.y, True), (self.x, True), (self.y, True)])
            return M
        return self.x @ self.y @ np.linalg.inv(self.x) @ np.linalg.inv(self.y)

    @property
    def residual(self) -> float:
        return float(np.linalg.norm(self.product() - self.target) / max(np.linalg.norm(self.target), 1e-300))

    def to_json(self) -> dict:
        return {
            "commutator": {
                "x": matrix_to_json(self.x),
                "y": matrix_to_json(self.y),
                "antiholomorphic": self.antiholomorphic,
            },
            "residual": self.residual,
        }
