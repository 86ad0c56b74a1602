"""Domain types: bimaterial, crack-face loads, line defects, dipole matrices.

Geometry convention: the main interfacial crack occupies x1 < 0, x2 = 0 with
its tip at the origin. The upper half-plane (x2 > 0) has shear modulus
``mu_plus``, the lower one ``mu_minus``. Point forces act out of plane on the
crack faces at a distance ``offset`` behind the tip. A line defect of length
``2 * half_length`` is centred at polar position (d, phi) and tilted by alpha
against the positive x1-axis.

All types are immutable after construction.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

#: Above this slenderness ratio l/d the point-dipole asymptotics degrade.
EPSILON_VALIDITY_LIMIT = 0.3


class Face(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class DefectKind(enum.Enum):
    MICRO_CRACK = "micro_crack"
    RIGID_INCLUSION = "rigid_inclusion"


@dataclass(frozen=True)
class Bimaterial:
    """Two bonded elastic half-planes with shear moduli mu_plus (upper) and
    mu_minus (lower)."""

    mu_plus: float
    mu_minus: float

    def __post_init__(self):
        if not (self.mu_plus > 0.0):
            raise DomainError(f"mu_plus must be positive, got {self.mu_plus}")
        if not (self.mu_minus > 0.0):
            raise DomainError(f"mu_minus must be positive, got {self.mu_minus}")

    @property
    def eta(self) -> float:
        """Contrast parameter (mu_minus - mu_plus)/(mu_minus + mu_plus), in (-1, 1)."""
        return (self.mu_minus - self.mu_plus) / (self.mu_minus + self.mu_plus)

    @property
    def mu_sum(self) -> float:
        return self.mu_plus + self.mu_minus

    @property
    def mu_harmonic(self) -> float:
        """mu_plus*mu_minus/(mu_plus + mu_minus), the modulus scale of the
        perturbation formula."""
        return self.mu_plus * self.mu_minus / (self.mu_plus + self.mu_minus)


def make_bimaterial(mu_plus: float, mu_minus: float) -> Bimaterial:
    return Bimaterial(mu_plus, mu_minus)


@dataclass(frozen=True)
class PointForce:
    """Out-of-plane point force on a crack face, ``offset`` behind the tip."""

    face: Face
    offset: float
    magnitude: float

    def __post_init__(self):
        if not (self.offset > 0.0):
            raise DomainError(f"offset must be positive, got {self.offset}")


@dataclass(frozen=True)
class TractionProfile:
    """Distributed face traction with declared compact support.

    ``fn`` is force per unit length as a function of x1 < 0; the profile is
    nonzero only for x1 in [-s_max, -s_min]. Evaluation outside the support
    returns exactly zero.
    """

    fn: Callable[[float], float]
    s_min: float
    s_max: float

    def __post_init__(self):
        if not (0.0 <= self.s_min < self.s_max):
            raise DomainError(
                f"support must satisfy 0 <= s_min < s_max, got [{self.s_min}, {self.s_max}]"
            )

    def __call__(self, x1):
        x1 = np.asarray(x1, dtype=float)
        inside = (-self.s_max <= x1) & (x1 <= -self.s_min)
        out = np.where(inside, self.fn(x1), 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LoadSystem:
    """Ordered collection of point forces, optionally with distributed
    tractions (p_plus on the upper face, p_minus on the lower)."""

    forces: tuple[PointForce, ...] = ()
    tractions: Optional[tuple[TractionProfile, TractionProfile]] = None

    def __post_init__(self):
        object.__setattr__(self, "forces", tuple(self.forces))

    @property
    def has_tractions(self) -> bool:
        return self.tractions is not None


def two_point_load(F: float, a: float) -> LoadSystem:
    """Symmetric pair: force F on each crack face at distance a behind the tip."""
    if not (a > 0.0):
        raise DomainError(f"load offset a must be positive, got {a}")
    return LoadSystem(
        forces=(
            PointForce(Face.UPPER, a, F),
            PointForce(Face.LOWER, a, F),
        )
    )


def three_point_load(F: float, a: float, b: float) -> LoadSystem:
    """Self-balanced non-symmetric triple: F on the upper face at a, and F/2
    on the lower face at a - b and a + b."""
    if not (a - b > 0.0):
        raise DomainError(f"three-point load requires a - b > 0, got a={a}, b={b}")
    return LoadSystem(
        forces=(
            PointForce(Face.UPPER, a, F),
            PointForce(Face.LOWER, a - b, 0.5 * F),
            PointForce(Face.LOWER, a + b, 0.5 * F),
        )
    )


@dataclass(frozen=True)
class Defect:
    """Small line defect (micro-crack or rigid line inclusion).

    Position of the centre: (d*cos(phi), d*sin(phi)) with d > 0 and
    phi in (-pi, pi), sin(phi) != 0, so the defect lies strictly inside one
    half-plane. The orientation alpha is reduced to [0, pi) at construction
    (a line is invariant under alpha -> alpha + pi).
    """

    kind: DefectKind
    d: float
    phi: float
    half_length: float
    alpha: float

    def __post_init__(self):
        if not (self.d > 0.0):
            raise DomainError(f"defect distance d must be positive, got {self.d}")
        if not (self.half_length > 0.0):
            raise DomainError(
                f"defect half_length must be positive, got {self.half_length}"
            )
        if not (-np.pi < self.phi < np.pi) or self.phi == 0.0:
            raise DomainError(
                f"phi must lie in (-pi, pi) with sin(phi) != 0, got {self.phi}"
            )
        object.__setattr__(self, "alpha", float(np.mod(self.alpha, np.pi)))
        if self.epsilon > EPSILON_VALIDITY_LIMIT:
            warnings.warn(
                f"l/d = {self.epsilon:.3g} exceeds {EPSILON_VALIDITY_LIMIT}; "
                "the point-dipole asymptotics may be inaccurate",
                stacklevel=2,
            )

    @property
    def epsilon(self) -> float:
        """Slenderness ratio l/d driving the asymptotic error."""
        return self.half_length / self.d

    @property
    def epsilon_in_range(self) -> bool:
        return self.epsilon <= EPSILON_VALIDITY_LIMIT

    @property
    def in_upper_half_plane(self) -> bool:
        return self.phi > 0.0


def dipole_entries(kind: DefectKind, half_length, alpha):
    """Entries (m11, m12, m22) of the symmetric 2x2 dipole matrix.

    Accepts scalars or numpy arrays for ``half_length`` and ``alpha``; the
    grid sweep relies on this evaluating element-wise exactly as the scalar
    path does.
    """
    s = np.sin(alpha)
    c = np.cos(alpha)
    scale = np.pi * half_length * half_length
    if kind is DefectKind.MICRO_CRACK:
        return -scale * (s * s), scale * (s * c), -scale * (c * c)
    if kind is DefectKind.RIGID_INCLUSION:
        return scale * (c * c), scale * (s * c), scale * (s * s)
    raise DomainError(f"unknown defect kind {kind!r}")


@dataclass(frozen=True)
class DipoleMatrix:
    """Symmetric 2x2 dipole matrix of a line defect (units length^2)."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (2, 2):
            raise DomainError(f"dipole matrix must be 2x2, got shape {m.shape}")
        if m[0, 1] != m[1, 0]:
            raise DomainError("dipole matrix must be symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def trace(self) -> float:
        return float(self.entries[0, 0] + self.entries[1, 1])


def dipole_matrix(defect: Defect) -> DipoleMatrix:
    """Dipole matrix of a defect: -pi*l^2 * t t^T for a micro-crack with
    t = (sin a, -cos a), +pi*l^2 * s s^T for a rigid inclusion with
    s = (cos a, sin a)."""
    m11, m12, m22 = dipole_entries(defect.kind, defect.half_length, defect.alpha)
    return DipoleMatrix(np.array([[m11, m12], [m12, m22]]))
