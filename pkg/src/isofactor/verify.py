"""Independent verification of factorizations.

Nothing here calls a constructor: products are recomposed from the raw
factor matrices, every tagged property is re-measured, and the class table
is checked against a fresh classification of the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .classify import IsometryClass, classify_isometry, reflection_kind
from .errors import IsofactorError
from .factorization import Commutator, Factorization, FactorTag
from .jsonio import complex_to_json
from .rng import stream
from .spectral import expm, random_anti_hermitian
from .tolerances import Tolerances, resolve

__all__ = [
    "FactorCheck",
    "VerificationReport",
    "check_involution",
    "check_antiholo_involution",
    "check_factorization",
    "check_commutator",
    "brute_reversibility",
    "verification_tolerances",
    "EXPECTED_K",
]

# Verification runs at ten times the construction tolerances.
VERIFY_FACTOR = 10.0

EXPECTED_K = {
    IsometryClass.CENTRAL: None,
    IsometryClass.ELLIPTIC: 0,
    IsometryClass.HYPERBOLIC: 1,
    IsometryClass.ELLIPTO_TRANSLATION: 1,
    IsometryClass.ELLIPTO_PARABOLIC: 2,
    IsometryClass.VERTICAL_TRANSLATION: None,
    IsometryClass.NON_VERTICAL_TRANSLATION: None,
}


def verification_tolerances(tol=None) -> Tolerances:
    """Ten times the construction defaults, or exactly ``tol`` when given."""
    if tol is None:
        return resolve(None).scaled(VERIFY_FACTOR)
    return resolve(tol)


def check_involution(F) -> float:
    """``|F^2 - I|_F``."""
    F = np.asarray(F, dtype=complex)
    return float(np.linalg.norm(F @ F - np.eye(F.shape[0])))


def check_antiholo_involution(A) -> float:
    """``|A conj(A) - I|_F``, the involution defect of ``v -> A conj(v)``."""
    A = np.asarray(A, dtype=complex)
    return float(np.linalg.norm(A @ np.conj(A) - np.eye(A.shape[0])))


def _sign_form(m: int, form: str) -> np.ndarray:
    J = np.eye(m)
    if form == "indefinite":
        J[0, 0] = -1.0
    return J


def _unitarity(F, J) -> float:
    return float(np.linalg.norm(F.conj().T @ J @ F - J) / np.linalg.norm(J))


@dataclass(frozen=True)
class FactorCheck:
    tag: str
    involution_residual: float | None
    unitarity_residual: float
    det: complex
    reflection_ok: bool | None = None

    def to_json(self) -> dict:
        out = {
            "tag": self.tag,
            "involution_residual": self.involution_residual,
            "unitarity_residual": self.unitarity_residual,
            "det": complex_to_json(self.det),
        }
        if self.reflection_ok is not None:
            out["reflection_ok"] = self.reflection_ok
        return out


@dataclass(frozen=True)
class VerificationReport:
    """Result of `check_factorization`; ``ok`` summarizes every field."""

    reconstruction_residual: float
    per_factor: tuple
    count_ok: bool
    class_claim_ok: bool
    beyond_paper: bool
    tolerance: float
    detected_class: str | None = None
    notes: tuple = field(default=())

    @property
    def factors_ok(self) -> bool:
        for fc in self.per_factor:
            if fc.unitarity_residual > self.tolerance:
                return False
            if fc.involution_residual is not None and fc.involution_residual > self.tolerance:
                return False
            if fc.reflection_ok is False:
                return False
        return True

    @property
    def ok(self) -> bool:
        return (
            self.reconstruction_residual <= self.tolerance
            and self.factors_ok
            and self.count_ok
            and self.class_claim_ok
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "reconstruction_residual": self.reconstruction_residual,
            "per_factor": [fc.to_json() for fc in self.per_factor],
            "count_ok": self.count_ok,
            "class_claim_ok": self.class_claim_ok,
            "beyond_paper": self.beyond_paper,
            "tolerance": self.tolerance,
            "detected_class": self.detected_class,
            "notes": list(self.notes),
        }


def _recompose(f: Factorization):
    m = f.target.shape[0]
    M = np.eye(m, dtype=complex)
    anti = False
    for fac in f.factors:
        mat = np.asarray(fac.matrix, dtype=complex)
        M = M @ (np.conj(mat) if anti else mat)
        anti ^= fac.tag is FactorTag.ANTIHOLO_INVOLUTION
    return f.lift_scalar * M, anti


def check_factorization(target, f: Factorization, tol=None) -> VerificationReport:
    """Re-check every claim of ``f`` against ``target``.

    Parameters
    ----------
    target : array_like
    f : Factorization
    tol : float or Tolerances, optional
        Defaults to ten times the construction tolerances; a float sets the
        acceptance threshold for every residual directly.
    """
    T = np.asarray(target, dtype=complex)
    tols = verification_tolerances(tol)
    thr = tols.residual
    m = T.shape[0]
    notes = []
    if any(np.asarray(fac.matrix).shape != T.shape for fac in f.factors):
        return VerificationReport(np.inf, (), False, False, f.beyond_paper, thr, notes=("dimension mismatch",))
    J = _sign_form(m, f.form)
    M, anti = _recompose(f)
    if anti:
        notes.append("factors compose to an anti-holomorphic map")
        recon = np.inf
    else:
        recon = float(np.linalg.norm(M - T) / np.linalg.norm(T))
    checks = []
    for fac in f.factors:
        F = np.asarray(fac.matrix, dtype=complex)
        inv = None
        refl = None
        if fac.tag is FactorTag.INVOLUTION:
            inv = check_involution(F)
        elif fac.tag is FactorTag.ANTIHOLO_INVOLUTION:
            inv = check_antiholo_involution(F)
        elif fac.tag is FactorTag.K_REFLECTION:
            rk = reflection_kind(F, Tolerances(residual=thr))
            refl = bool(rk.is_k_reflection and (rk.k == fac.k or rk.k == 0 and abs(rk.lam - 1) <= thr))
            if refl and fac.lam is not None and rk.k == fac.k and abs(rk.lam - fac.lam) > 1e-6:
                refl = False
            if not refl:
                notes.append(f"factor tagged {fac.k}-reflection is {tuple(rk)}")
        checks.append(FactorCheck(fac.tag.value, inv, _unitarity(F, J), complex(np.linalg.det(F)), refl))
    detected = None
    class_ok = True
    count_ok = True
    tags = [fac.tag for fac in f.factors]
    n_inv = sum(t is FactorTag.INVOLUTION for t in tags)
    n_anti = sum(t is FactorTag.ANTIHOLO_INVOLUTION for t in tags)
    refls = [fac for fac in f.factors if fac.tag is FactorTag.K_REFLECTION]
    if n_anti:
        count_ok = n_anti == 2 and len(tags) == 2
    elif f.form == "definite":
        bound = 5 if m % 4 == 2 else 4
        count_ok = n_inv <= bound and not refls
    else:
        try:
            cls = classify_isometry(T)
        except IsofactorError as exc:
            notes.append(f"target could not be classified: {exc}")
            cls = None
        if cls is not None:
            kind = cls.isometry_class
            detected = kind.value
            if f.isometry_class is not None:
                class_ok = f.isometry_class == kind.value
            want = EXPECTED_K[kind]
            if want is None:
                count_ok = n_inv <= 4 and not refls
            else:
                count_ok = n_inv <= 4 and len(refls) == 1 and refls[0].k == want
            if kind is IsometryClass.CENTRAL:
                count_ok = count_ok and not f.factors
        else:
            class_ok = False
            count_ok = False
    return VerificationReport(
        recon, tuple(checks), bool(count_ok), bool(class_ok), f.beyond_paper, thr, detected, tuple(notes)
    )


def check_commutator(target, c: Commutator, tol=None) -> VerificationReport:
    """Recompose ``x y x^{-1} y^{-1}`` (anti-holomorphic: ``x y x y``) and compare."""
    T = np.asarray(target, dtype=complex)
    tols = verification_tolerances(tol)
    if c.antiholomorphic:
        X, Y = c.x, c.y
        M = X @ np.conj(Y) @ X @ np.conj(Y)
        invs = (check_antiholo_involution(X), check_antiholo_involution(Y))
        checks = tuple(FactorCheck("antiholo_involution", r, 0.0, complex(np.linalg.det(A))) for r, A in zip(invs, (X, Y)))
    else:
        M = c.x @ c.y @ np.linalg.inv(c.x) @ np.linalg.inv(c.y)
        checks = ()
    recon = float(np.linalg.norm(M - T) / np.linalg.norm(T))
    return VerificationReport(recon, checks, True, True, False, tols.residual)


def brute_reversibility(T, trials: int = 8, seed: int = 0, tol: float = 1e-7) -> bool:
    """Check that ``T`` and ``T^{-1}`` have the same eigenvalue multiset.

    Each trial conjugates ``T`` by a fresh random unitary before calling the
    dense eigen-solver, and matches the two spectra by optimal assignment.
    Meant for semisimple inputs: the eigenvalues of a Jordan block scatter
    far beyond ``tol``.
    """
    T = np.asarray(T, dtype=complex)
    m = T.shape[0]
    Tinv = np.linalg.inv(T)
    scale = max(1.0, float(np.linalg.norm(T, 2)))
    for trial in range(max(1, trials)):
        g = expm(random_anti_hermitian(stream(seed, ("brute_reversibility", trial)), m, 1.0))
        a = np.linalg.eigvals(g @ T @ g.conj().T)
        b = np.linalg.eigvals(Tinv)
        cost = np.abs(a[:, None] - b[None, :])
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].max() > tol * scale:
            return False
    return True
