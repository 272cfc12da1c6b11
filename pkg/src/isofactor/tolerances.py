"""Numerical tolerance policy shared by every module.

All thresholds are relative.  Residual checks default to ``1e-9``; rank and
signature decisions default to ``1e-7``.  The environment variable
``ISOFACTOR_TOL`` overrides the residual default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_VAR = "ISOFACTOR_TOL"

RESIDUAL_TOL = 1e-9
RANK_TOL = 1e-7
# Eigenvalues of a Jordan block of size 3 scatter like eps**(1/3) ~ 1e-5 in
# double precision, so the clustering radius must sit above that.
CLUSTER_TOL = 1e-4


@dataclass(frozen=True)
class Tolerances:
    """Bundle of thresholds passed through the pipeline.

    Attributes
    ----------
    residual : float
        Relative Frobenius residual accepted for identities such as
        ``A^H J A = J`` or a reconstructed product.
    rank : float
        Relative singular-value threshold for kernels and signatures.
    cluster : float
        Single-linkage radius (relative to ``max(1, |A|)``) used to group
        computed eigenvalues.
    """

    residual: float = RESIDUAL_TOL
    rank: float = RANK_TOL
    cluster: float = CLUSTER_TOL

    def __post_init__(self):
        for name in ("residual", "rank", "cluster"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value!r}")

    @property
    def modulus(self) -> float:
        """Band for deciding ``|lambda| != 1`` (hyperbolic vs. the rest)."""
        return 10.0 * self.rank

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, residual=self.residual * factor)


def default_tolerances() -> Tolerances:
    """Defaults, with ``ISOFACTOR_TOL`` overriding the residual tolerance."""
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return Tolerances()
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_VAR} must be a positive float, got {raw!r}") from exc
    return Tolerances(residual=value)


def resolve(tol) -> Tolerances:
    """Accept ``None``, a float (residual tolerance) or a `Tolerances`."""
    if tol is None:
        return default_tolerances()
    if isinstance(tol, Tolerances):
        return tol
    return replace(default_tolerances(), residual=float(tol))
