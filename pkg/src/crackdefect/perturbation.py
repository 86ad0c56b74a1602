"""SIF perturbation by small line defects.

Implements the point-dipole perturbation

    dK = -sqrt(2/pi) * mu+ mu-/(mu+ + mu-) * B(d, phi) . M(l, alpha) c(d, phi)

with B the displacement-gradient vector of the unperturbed field at the
defect centre, M the dipole matrix and c the weight vector. Multiple defects
superpose linearly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .field import SQRT_2_OVER_PI, assemble_B, sif_total
from .model import Bimaterial, Defect, DefectKind, LoadSystem, dipole_entries

#: |ratio| below this counts as neither shielding nor amplification.
CLASSIFICATION_TOL = 1e-14


class Classification(enum.Enum):
    SHIELDING = "shielding"
    AMPLIFICATION = "amplification"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class DeltaKResult:
    delta_k: float
    ratio: Optional[float]  # dK / K0; absent when K0 == 0
    classification: Classification
    per_defect: tuple[float, ...]
    k0: float


def weight_vector_c(d: float, phi):
    """Weight vector c(d, phi) = 1/(2 d^{3/2}) * (-sin(3phi/2), cos(3phi/2))."""
    if not (d > 0.0):
        raise DomainError(f"d must be positive, got {d}")
    phi = np.asarray(phi, dtype=float)
    pre = 0.5 * d ** -1.5
    return np.stack([-pre * np.sin(1.5 * phi), pre * np.cos(1.5 * phi)])


def bilinear_form(b1, b2, c1, c2, m11, m12, m22):
    """B^T M c for a symmetric M given by its entries.

    Written out explicitly so the scalar path and the broadcast grid path
    perform identical floating-point operations.
    """
    return (b1 * m11 + b2 * m12) * c1 + (b1 * m12 + b2 * m22) * c2


def _delta_k_value(material: Bimaterial, loads: LoadSystem, defect: Defect) -> float:
    B = assemble_B(material, loads, defect.d, defect.phi)
    c = weight_vector_c(defect.d, defect.phi)
    m11, m12, m22 = dipole_entries(defect.kind, defect.half_length, defect.alpha)
    return float(
        -SQRT_2_OVER_PI
        * material.mu_harmonic
        * bilinear_form(B[0], B[1], c[0], c[1], m11, m12, m22)
    )


def _classify(delta_k: float, ratio: Optional[float]) -> Classification:
    # Shielding/amplification follow the sign of dK/K0 so the label is
    # invariant under flipping the load sign. With K0 == 0 only the raw
    # sign of dK is available.
    value = ratio if ratio is not None else delta_k
    if abs(value) < CLASSIFICATION_TOL:
        return Classification.NEUTRAL
    return Classification.SHIELDING if value < 0.0 else Classification.AMPLIFICATION


def _build_result(material, loads, per_defect) -> DeltaKResult:
    delta_k = sum(per_defect)
    k0 = sif_total(material, loads).total
    ratio = delta_k / k0 if k0 != 0.0 else None
    return DeltaKResult(
        delta_k=delta_k,
        ratio=ratio,
        classification=_classify(delta_k, ratio),
        per_defect=tuple(per_defect),
        k0=k0,
    )


def delta_k(material: Bimaterial, loads: LoadSystem, defect: Defect) -> DeltaKResult:
    """Perturbation of K_III by a single defect."""
    return _build_result(material, loads, [_delta_k_value(material, loads, defect)])


def delta_k_multi(
    material: Bimaterial, loads: LoadSystem, defects
) -> DeltaKResult:
    """Perturbation by several defects: plain sum of single-defect values."""
    per_defect = []
    for i, defect in enumerate(defects):
        try:
            per_defect.append(_delta_k_value(material, loads, defect))
        except (DomainError, TypeError, AttributeError) as exc:
            raise DomainError(f"defect {i}: {exc}") from exc
    return _build_result(material, loads, per_defect)


def g_function(material: Bimaterial, loads: LoadSystem, defect: Defect) -> float:
    """Normalized angular factor G(phi, alpha) in

        dK/K0 = (l/d)^2 * mu+ mu-/(mu+ + mu-) * G(phi, alpha).

    Micro-crack: G = cos(3phi/2 - alpha) * sqrt(pi d)/(sqrt(2) K0) * B.(-sin a, cos a);
    rigid inclusion: the same with sin(3phi/2 - alpha) and B.(cos a, sin a).
    """
    k0 = sif_total(material, loads).total
    if k0 == 0.0:
        raise DomainError("G is undefined for K0 == 0")
    B = assemble_B(material, loads, defect.d, defect.phi)
    pre = np.sqrt(np.pi * defect.d) / (np.sqrt(2.0) * k0)
    arg = 1.5 * defect.phi - defect.alpha
    if defect.kind is DefectKind.MICRO_CRACK:
        proj = -B[0] * np.sin(defect.alpha) + B[1] * np.cos(defect.alpha)
        return float(np.cos(arg) * pre * proj)
    proj = B[0] * np.cos(defect.alpha) + B[1] * np.sin(defect.alpha)
    return float(np.sin(arg) * pre * proj)
