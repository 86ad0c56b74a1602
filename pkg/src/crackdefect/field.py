"""Unperturbed interfacial-crack fields.

Stress intensity factor K0_III for point forces and distributed face
tractions (weight-function integral), and the displacement-gradient vector
at a probe point Y = (d*cos(phi), d*sin(phi)), both exact and in the
far-field (a >> d) approximation.

Gradient vectors are numpy arrays of shape (2,) + shape(phi): component 0 is
du/dx1, component 1 is du/dx2. Passing an array of phi values evaluates the
whole grid in one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureError, UnsupportedLoadError
from .model import Bimaterial, Face, LoadSystem, PointForce, TractionProfile

SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)


def sif_point_force(material: Bimaterial, force: PointForce) -> float:
    """K0 contribution of a single point force:
    -(1 +/- eta)/sqrt(2*pi) * F / sqrt(a), '+' for the upper face."""
    sign = 1.0 if force.face is Face.UPPER else -1.0
    return float(
        -(1.0 + sign * material.eta)
        / np.sqrt(2.0 * np.pi)
        * force.magnitude
        / np.sqrt(force.offset)
    )


@dataclass(frozen=True)
class Sif0Result:
    """Unperturbed SIF with its per-load decomposition (input order)."""

    total: float
    per_force: tuple[float, ...]
    traction_part: float


def sif_total(material: Bimaterial, loads: LoadSystem) -> Sif0Result:
    per_force = tuple(sif_point_force(material, f) for f in loads.forces)
    traction_part = 0.0
    if loads.has_tractions:
        p_plus, p_minus = loads.tractions
        traction_part = sif_tractions(material, p_plus, p_minus)
    return Sif0Result(
        total=sum(per_force) + traction_part,
        per_force=per_force,
        traction_part=traction_part,
    )


@lru_cache(maxsize=None)
def _gauss_rule(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _gauss_panel(f, a: float, b: float, n: int = 15) -> float:
    nodes, weights = _gauss_rule(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(weights, f(mid + half * nodes)))


def _adaptive_gauss(f, a, b, rel_tol, max_levels):
    """Adaptive composite 15-point Gauss with interval bisection."""
    total_scale = abs(_gauss_panel(f, a, b)) + 1e-300
    stack = [(a, b, _gauss_panel(f, a, b), 0)]
    total = 0.0
    worst = 0.0
    failed = False
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _gauss_panel(f, lo, mid)
        right = _gauss_panel(f, mid, hi)
        err = abs(left + right - whole)
        if err <= rel_tol * max(total_scale, abs(left + right)):
            total += left + right
        elif depth >= max_levels:
            total += left + right
            worst = max(worst, err)
            failed = True
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    if failed and worst > rel_tol * max(abs(total), 1e-300):
        raise QuadratureError(
            f"quadrature did not converge below rel_tol={rel_tol} "
            f"after {max_levels} refinement levels",
            estimate=total,
            error_bound=worst,
        )
    return total


def sif_tractions(
    material: Bimaterial,
    p_plus: TractionProfile,
    p_minus: TractionProfile,
    rel_tol: float = 1e-10,
    max_levels: int = 40,
) -> float:
    """Weight-function SIF of distributed tractions,

        K0 = -sqrt(2/pi) * Int [mu_- p+ + mu_+ p-]/(mu_+ + mu_-) * (-x1)^{-1/2} dx1.

    The substitution x1 = -t^2 removes the endpoint singularity exactly; each
    profile is integrated over its own declared support.
    """
    mu_sum = material.mu_sum

    def part(profile: TractionProfile, mu_other: float) -> float:
        lo = np.sqrt(profile.s_min)
        hi = np.sqrt(profile.s_max)

        def integrand(t):
            return (mu_other / mu_sum) * profile(-t * t)

        return _adaptive_gauss(integrand, lo, hi, rel_tol, max_levels)

    integral = part(p_plus, material.mu_minus) + part(p_minus, material.mu_plus)
    return -SQRT_2_OVER_PI * 2.0 * integral


def _face_params(material: Bimaterial, face: Face):
    """Modulus in the numerator of the weight ratio and the face sign."""
    if face is Face.UPPER:
        return material.mu_minus, 1.0
    return material.mu_plus, -1.0


def _mu_at_probe(material: Bimaterial, sin_phi):
    """Modulus of the half-plane containing the probe point."""
    return np.where(sin_phi > 0.0, material.mu_plus, material.mu_minus)


def _check_phi(phi):
    phi = np.asarray(phi, dtype=float)
    sin_phi = np.sin(phi)
    if np.any(sin_phi == 0.0):
        raise DomainError("probe point must lie off the interface: sin(phi) != 0")
    return phi, sin_phi


def gradient_of_force(material: Bimaterial, force: PointForce, d: float, phi):
    """Exact displacement gradient (du/dx1, du/dx2) at Y = (d cos phi, d sin phi)
    produced by a single crack-face point force."""
    if not (d > 0.0):
        raise DomainError(f"probe distance d must be positive, got {d}")
    phi, sin_phi = _check_phi(phi)
    mu_num, sgn = _face_params(material, force.face)
    mu_here = _mu_at_probe(material, sin_phi)
    ratio = mu_num / mu_here

    r = force.offset / d  # a/d
    sqrt_r = np.sqrt(r)
    cos_phi = np.cos(phi)
    denom = np.pi * d * material.mu_sum * (2.0 * cos_phi + r + 1.0 / r)
    F = force.magnitude

    half = 0.5 * (r - 1.0 / r)
    g1 = (F / denom) * (
        ratio * (sqrt_r * np.sin(0.5 * phi) + np.sin(1.5 * phi) / sqrt_r)
        + sgn * (sin_phi * sin_phi - half * cos_phi)
    )
    g2 = (F / denom) * (
        -ratio * (sqrt_r * np.cos(0.5 * phi) + np.cos(1.5 * phi) / sqrt_r)
        - sgn * sin_phi * (cos_phi + half)
    )
    return np.stack([g1, g2])


def far_field_gradient(material: Bimaterial, force: PointForce, d: float, phi):
    """Leading far-field expansion of :func:`gradient_of_force`, accurate to
    O((d/a)^{3/2}) for d/a -> 0."""
    if not (d > 0.0):
        raise DomainError(f"probe distance d must be positive, got {d}")
    phi, sin_phi = _check_phi(phi)
    mu_num, sgn = _face_params(material, force.face)
    ratio = mu_num / _mu_at_probe(material, sin_phi)

    rho = d / force.offset  # d/a
    sqrt_rho = np.sqrt(rho)
    F = force.magnitude
    pre = F / (np.pi * d * material.mu_sum)

    g1 = pre * (-sgn * 0.5 * np.cos(phi) + ratio * sqrt_rho * np.sin(0.5 * phi) + sgn * rho)
    g2 = 0.5 * pre * (-sgn * sin_phi - 2.0 * ratio * sqrt_rho * np.cos(0.5 * phi))
    return np.stack([g1, g2])


def assemble_B(material: Bimaterial, loads: LoadSystem, d: float, phi):
    """Gradient vector B(d, phi): sum of the exact per-force gradients.

    Point-force loads only; gradient fields of distributed tractions are not
    provided.
    """
    if loads.has_tractions:
        raise UnsupportedLoadError(
            "gradient assembly supports point-force loads only"
        )
    phi_arr = np.asarray(phi, dtype=float)
    total = np.zeros((2,) + phi_arr.shape)
    for force in loads.forces:
        total = total + gradient_of_force(material, force, d, phi)
    return total
