"""Simplified far-field approximations of dK/K0 and their error sweeps.

These are the a >> d limits of the exact dipole formula for self-balanced
crack-face loads. ``homogeneous_ratio`` is the homogeneous-plane limit;
``simplified_ratio`` keeps the bimaterial prefactor; ``three_point_ratio``
adds the first d/a correction for the three-point load family.

Sign conventions follow the exact perturbation engine (and, for the
micro-crack, the homogeneous-plane limit), which fixes the overall sign of
the rigid-inclusion formulas and the sign of the d/a correction terms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .model import Bimaterial, Defect, DefectKind, LoadSystem
from .perturbation import delta_k

#: |exact ratio| below this is treated as zero when forming relative errors.
ZERO_RATIO_FLOOR = 1e-300


def homogeneous_ratio(epsilon: float, phi: float, alpha: float) -> float:
    """Homogeneous-plane micro-crack ratio
    dK/K0 = (eps^2/4) cos(3phi/2 - alpha) cos(phi/2 - alpha)."""
    if not (epsilon > 0.0):
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    return (
        0.25
        * epsilon**2
        * np.cos(1.5 * phi - alpha)
        * np.cos(0.5 * phi - alpha)
    )


def _mu_opposite(material: Bimaterial, defect: Defect) -> float:
    """Modulus of the half-plane NOT containing the defect."""
    return material.mu_minus if defect.in_upper_half_plane else material.mu_plus


def _prefactor(material: Bimaterial, defect: Defect) -> float:
    return 0.5 * _mu_opposite(material, defect) / material.mu_sum * defect.epsilon**2


def simplified_ratio(material: Bimaterial, defect: Defect) -> float:
    """Load-independent a -> infinity limit of dK/K0 for a self-balanced load."""
    pre = _prefactor(material, defect)
    arg3 = 1.5 * defect.phi - defect.alpha
    arg1 = 0.5 * defect.phi - defect.alpha
    if defect.kind is DefectKind.MICRO_CRACK:
        return pre * np.cos(arg3) * np.cos(arg1)
    return -pre * np.sin(arg3) * np.sin(arg1)


def three_point_ratio(
    material: Bimaterial, defect: Defect, a: float, b: float
) -> float:
    """Three-point-load ratio including the first d/a correction; valid for
    b/a small (flagged when b^2/a^2 > 0.01)."""
    if not (a - b > 0.0):
        raise DomainError(f"three-point load requires a - b > 0, got a={a}, b={b}")
    if b * b / (a * a) > 0.01:
        warnings.warn(
            f"b^2/a^2 = {b * b / (a * a):.3g} > 0.01; the neglected O(b^2/a^2) "
            "terms may dominate the d/a correction",
            stacklevel=2,
        )
    pre = _prefactor(material, defect)
    rho = defect.d / a
    arg3 = 1.5 * defect.phi - defect.alpha
    arg1m = 0.5 * defect.phi - defect.alpha
    arg1p = 0.5 * defect.phi + defect.alpha
    if defect.kind is DefectKind.MICRO_CRACK:
        return pre * np.cos(arg3) * (np.cos(arg1m) - rho * np.cos(arg1p))
    return -pre * np.sin(arg3) * (np.sin(arg1m) + rho * np.sin(arg1p))


@dataclass(frozen=True)
class ComparisonRow:
    """One point of an approximation-vs-exact sweep."""

    a_over_d: float
    exact_ratio: float
    approx_ratio: float
    relative_error: Optional[float]  # None when the exact ratio vanishes
    flagged: bool = False


def error_sweep(
    material: Bimaterial,
    defect: Defect,
    load_family: Callable[[float], LoadSystem],
    a_values,
) -> list[ComparisonRow]:
    """Relative error of the simplified ratio against the exact engine over a
    sweep of load distances.

    The approximation is ``homogeneous_ratio`` for a micro-crack in a homogeneous
    plane and ``simplified_ratio`` otherwise.
    """
    if material.eta == 0.0 and defect.kind is DefectKind.MICRO_CRACK:
        approx = homogeneous_ratio(defect.epsilon, defect.phi, defect.alpha)
    else:
        approx = simplified_ratio(material, defect)

    rows = []
    for a in a_values:
        exact = delta_k(material, load_family(a), defect).ratio
        if exact is None or abs(exact) < ZERO_RATIO_FLOOR:
            rows.append(
                ComparisonRow(a / defect.d, exact if exact is not None else 0.0,
                              approx, None, flagged=True)
            )
            continue
        rel = abs(approx - exact) / abs(exact)
        rows.append(ComparisonRow(a / defect.d, exact, approx, rel))
    return rows
