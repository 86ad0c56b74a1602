"""Shielding/amplification maps over defect position and orientation.

Sweeps (phi, alpha) on a cell-centred grid over (-pi, pi) x (0, pi), fills
dK/K0 and its sign classification, extracts the zero-level boundary curves by
marching squares, and exports CSV/SVG.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .field import SQRT_2_OVER_PI, assemble_B, sif_total
from .model import Bimaterial, Defect, DefectKind, LoadSystem, dipole_entries
from .perturbation import CLASSIFICATION_TOL, Classification, weight_vector_c

DEFAULT_RESOLUTION = (720, 360)

_CLASS_BY_SIGN = {
    -1: Classification.SHIELDING,
    0: Classification.NEUTRAL,
    1: Classification.AMPLIFICATION,
}


@dataclass(frozen=True)
class DefectTemplate:
    """A defect with position and orientation left free for the sweep."""

    kind: DefectKind
    d: float
    half_length: float

    def __post_init__(self):
        if not (self.d > 0.0):
            raise DomainError(f"d must be positive, got {self.d}")
        if not (self.half_length > 0.0):
            raise DomainError(f"half_length must be positive, got {self.half_length}")

    def at(self, phi: float, alpha: float) -> Defect:
        return Defect(self.kind, self.d, phi, self.half_length, alpha)


@dataclass(frozen=True)
class MapGrid:
    """dK/K0 over cell centres of (-pi, pi) x (0, pi).

    ``values[i, j]`` belongs to (phi_axis[i], alpha_axis[j]); ``signs`` holds
    -1/0/+1 for shielding/neutral/amplification. ``center_fn`` evaluates the
    ratio at arbitrary (phi, alpha) and is used to disambiguate saddle cells
    during contouring.
    """

    phi_axis: np.ndarray = field(repr=False)
    alpha_axis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    center_fn: Optional[Callable[[float, float], float]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        expect = (len(self.phi_axis), len(self.alpha_axis))
        if self.values.shape != expect or self.signs.shape != expect:
            raise DomainError(
                f"grid shape mismatch: axes imply {expect}, "
                f"values {self.values.shape}, signs {self.signs.shape}"
            )

    def classification(self, i: int, j: int) -> Classification:
        return _CLASS_BY_SIGN[int(self.signs[i, j])]


@dataclass(frozen=True)
class BoundaryCurve:
    """Ordered polyline of (phi, alpha) points where dK/K0 crosses zero."""

    points: np.ndarray = field(repr=False)

    @property
    def closed(self) -> bool:
        return bool(np.all(self.points[0] == self.points[-1])) and len(self.points) > 2


def classify_values(values: np.ndarray) -> np.ndarray:
    signs = np.sign(values).astype(np.int8)
    signs[np.abs(values) < CLASSIFICATION_TOL] = 0
    return signs


def _axes(resolution) -> tuple[np.ndarray, np.ndarray]:
    n_phi, n_alpha = resolution
    if n_phi < 8 or n_alpha < 8:
        raise DomainError(f"grid resolution must be at least 8x8, got {resolution}")
    h_phi = 2.0 * np.pi / n_phi
    h_alpha = np.pi / n_alpha
    phi = -np.pi + (np.arange(n_phi) + 0.5) * h_phi
    alpha = (np.arange(n_alpha) + 0.5) * h_alpha
    return phi, alpha


def compute_map(
    material: Bimaterial,
    loads: LoadSystem,
    defect_template: DefectTemplate,
    resolution=DEFAULT_RESOLUTION,
) -> MapGrid:
    """Evaluate dK/K0 of the templated defect at every grid node.

    Cell centres never touch phi = 0 or +/-pi, so the sin(phi) = 0
    singularity is excluded by construction.
    """
    k0 = sif_total(material, loads).total
    if k0 == 0.0:
        raise DomainError("region map needs K0 != 0 to normalize dK")

    phi_axis, alpha_axis = _axes(resolution)
    d = defect_template.d
    l = defect_template.half_length
    kind = defect_template.kind
    pre = -SQRT_2_OVER_PI * material.mu_harmonic

    def ratio_at(phi, alpha):
        B = assemble_B(material, loads, d, phi)
        c = weight_vector_c(d, phi)
        m11, m12, m22 = dipole_entries(kind, l, alpha)
        from .perturbation import bilinear_form

        return pre * bilinear_form(B[0], B[1], c[0], c[1], m11, m12, m22) / k0

    # broadcast phi down the rows, alpha across the columns
    values = ratio_at(phi_axis[:, None], alpha_axis[None, :])

    def center_fn(phi: float, alpha: float) -> float:
        return float(ratio_at(phi, alpha))

    return MapGrid(
        phi_axis=phi_axis,
        alpha_axis=alpha_axis,
        values=values,
        signs=classify_values(values),
        center_fn=center_fn,
    )


def _edge_point(pa, pb, va, vb):
    t = va / (va - vb)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def extract_boundary(grid: MapGrid) -> list[BoundaryCurve]:
    """Zero-level contours of the ratio field by marching squares with linear
    edge interpolation. Saddle cells are resolved by the sign at the cell
    centre (via ``grid.center_fn`` when available, else the corner mean)."""
    V = grid.values
    phi, alpha = grid.phi_axis, grid.alpha_axis
    pos = V > 0.0

    # cells whose corners are not all one sign
    p00 = pos[:-1, :-1]
    p10 = pos[1:, :-1]
    p01 = pos[:-1, 1:]
    p11 = pos[1:, 1:]
    mixed = ~((p00 & p10 & p01 & p11) | ~(p00 | p10 | p01 | p11))
    cells = np.argwhere(mixed)

    points: dict[tuple, tuple] = {}
    adjacency: dict[tuple, list] = {}
    segments = []

    def edge_key(kind, i, j):
        return (kind, i, j)

    def crossing(kind, i, j):
        # horizontal edge: nodes (i,j)-(i+1,j); vertical: (i,j)-(i,j+1)
        if kind == "h":
            va, vb = V[i, j], V[i + 1, j]
            pa, pb = (phi[i], alpha[j]), (phi[i + 1], alpha[j])
        else:
            va, vb = V[i, j], V[i, j + 1]
            pa, pb = (phi[i], alpha[j]), (phi[i], alpha[j + 1])
        if (va > 0.0) == (vb > 0.0):
            return None
        key = edge_key(kind, i, j)
        if key not in points:
            points[key] = _edge_point(pa, pb, va, vb)
        return key

    def add_segment(ka, kb):
        segments.append((ka, kb))
        adjacency.setdefault(ka, []).append(kb)
        adjacency.setdefault(kb, []).append(ka)

    for i, j in cells:
        bottom = crossing("h", i, j)
        top = crossing("h", i, j + 1)
        left = crossing("v", i, j)
        right = crossing("v", i + 1, j)
        crossed = [k for k in (bottom, right, top, left) if k is not None]
        if len(crossed) == 2:
            add_segment(crossed[0], crossed[1])
        elif len(crossed) == 4:
            cx = 0.5 * (phi[i] + phi[i + 1])
            cy = 0.5 * (alpha[j] + alpha[j + 1])
            center = None
            if grid.center_fn is not None and np.sin(cx) != 0.0:
                # cell centres between phi rows can land exactly on the
                # interface, where the field is undefined
                center = grid.center_fn(cx, cy)
            if center is None:
                center = 0.25 * (V[i, j] + V[i + 1, j] + V[i, j + 1] + V[i + 1, j + 1])
            if (center > 0.0) == bool(pos[i, j]):
                add_segment(bottom, right)
                add_segment(top, left)
            else:
                add_segment(bottom, left)
                add_segment(top, right)
        # odd counts only occur when a corner value is exactly zero; skip

    return _chain_segments(points, adjacency)


def _chain_segments(points, adjacency) -> list[BoundaryCurve]:
    visited = set()
    curves = []

    def walk(start):
        path = [start]
        visited.add(start)
        current = start
        while True:
            nxt = None
            for neighbor in adjacency[current]:
                if neighbor not in visited:
                    nxt = neighbor
                    break
            if nxt is None:
                # close the loop if the start is adjacent again
                if len(path) > 2 and start in adjacency[current]:
                    path.append(start)
                return path
            path.append(nxt)
            visited.add(nxt)
            current = nxt

    endpoints = [k for k, nbrs in adjacency.items() if len(nbrs) == 1]
    for key in endpoints:
        if key not in visited:
            curves.append(walk(key))
    for key in adjacency:  # remaining closed loops
        if key not in visited:
            curves.append(walk(key))

    return [
        BoundaryCurve(points=np.array([points[k] for k in path]))
        for path in curves
        if len(path) >= 2
    ]


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class ExportPaths:
    grid_csv: Path
    curves_csv: Path
    svg: Optional[Path] = None


_CLASS_LABEL = {-1: "shielding", 0: "neutral", 1: "amplification"}
_CLASS_FILL = {-1: "#d3d3d3", 1: "#696969"}


def export_map(grid: MapGrid, curves, paths: ExportPaths) -> list[Path]:
    """Write the grid CSV, the boundary-curve CSV, and optionally an SVG.

    Grid rows are emitted phi-major (outer loop over phi), numbers with 17
    significant digits, LF line endings.
    """
    written = []

    lines = ["phi,alpha,ratio,classification"]
    for i, p in enumerate(grid.phi_axis):
        for j, a in enumerate(grid.alpha_axis):
            lines.append(
                f"{_fmt(p)},{_fmt(a)},{_fmt(grid.values[i, j])},"
                f"{_CLASS_LABEL[int(grid.signs[i, j])]}"
            )
    _write_text(paths.grid_csv, "\n".join(lines) + "\n")
    written.append(paths.grid_csv)

    lines = ["curve_id,phi,alpha"]
    for cid, curve in enumerate(curves):
        for p, a in curve.points:
            lines.append(f"{cid},{_fmt(p)},{_fmt(a)}")
    _write_text(paths.curves_csv, "\n".join(lines) + "\n")
    written.append(paths.curves_csv)

    if paths.svg is not None:
        _write_text(paths.svg, _render_svg(grid, curves))
        written.append(paths.svg)
    return written


def _write_text(path: Path, text: str):
    try:
        Path(path).write_text(text, newline="\n")
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc


def _svg_x(phi: float, width: float) -> float:
    return (phi + np.pi) / (2.0 * np.pi) * width


def _svg_y(alpha: float, height: float) -> float:
    return height - alpha / np.pi * height


def _render_svg(grid: MapGrid, curves, width=720.0, height=360.0) -> str:
    n_phi, n_alpha = grid.signs.shape
    cell_w = width / n_phi
    cell_h = height / n_alpha
    # one rect per run of equal classification along phi, grouped by class
    rects = {-1: [], 1: []}
    for j in range(n_alpha):
        y = height - (j + 1) * cell_h
        i = 0
        col = grid.signs[:, j]
        while i < n_phi:
            s = int(col[i])
            run = i
            while run < n_phi and col[run] == s:
                run += 1
            if s in rects:
                rects[s].append(
                    f'<rect x="{i * cell_w:.3f}" y="{y:.3f}" '
                    f'width="{(run - i) * cell_w:.3f}" height="{cell_h:.3f}"/>'
                )
            i = run

    groups = []
    for s, fill in _CLASS_FILL.items():
        groups.append(
            f'<g fill="{fill}" stroke="none">' + "".join(rects[s]) + "</g>"
        )
    for curve in curves:
        pts = " ".join(
            f"{_svg_x(p, width):.3f},{_svg_y(a, height):.3f}" for p, a in curve.points
        )
        groups.append(
            f'<g fill="none" stroke="black" stroke-width="1.2">'
            f'<polyline points="{pts}"/></g>'
        )

    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {width:g} {height:g}" width="{width:g}" height="{height:g}">\n'
        + "\n".join(groups)
        + "\n</svg>\n"
    )
