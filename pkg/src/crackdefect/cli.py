"""Command-line front end.

Subcommands: ``sif``, ``delta-k``, ``compare``, ``map``, ``validate``.
Inputs come from a JSON config file (strict: unknown keys are rejected);
results go to CSV/SVG files plus a machine-readable JSON summary on stdout.

Exit codes: 0 success, 1 config error, 2 numeric error, 3 I/O error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import approx, perturbation, regionmap
from .errors import DomainError, QuadratureError, UnsupportedLoadError
from .field import sif_total
from .model import (
    Bimaterial,
    Defect,
    DefectKind,
    Face,
    LoadSystem,
    PointForce,
    three_point_load,
    two_point_load,
)

EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


class ConfigError(Exception):
    pass


def _block(cfg: dict, name: str, allowed: set, required: set):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{name}: expected an object")
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {sorted(unknown)}")
    missing = required - set(cfg)
    if missing:
        raise ConfigError(f"{name}: missing key(s) {sorted(missing)}")
    return cfg


def _number(cfg, name, key):
    v = cfg[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(f"{name}.{key}: expected a number, got {v!r}")
    return float(v)


def _angle(cfg, name, key, degrees):
    v = _number(cfg, name, key)
    return np.radians(v) if degrees else v


def parse_material(cfg) -> Bimaterial:
    _block(cfg, "material", {"mu_plus", "mu_minus"}, {"mu_plus", "mu_minus"})
    try:
        return Bimaterial(_number(cfg, "material", "mu_plus"),
                          _number(cfg, "material", "mu_minus"))
    except DomainError as exc:
        raise ConfigError(f"material: {exc}") from exc


def parse_load(cfg) -> LoadSystem:
    _block(cfg, "load", {"kind", "F", "a", "b", "forces"}, {"kind"})
    kind = cfg["kind"]
    try:
        if kind == "two_point":
            _block(cfg, "load", {"kind", "F", "a"}, {"kind", "F", "a"})
            return two_point_load(_number(cfg, "load", "F"), _number(cfg, "load", "a"))
        if kind == "three_point":
            _block(cfg, "load", {"kind", "F", "a", "b"}, {"kind", "F", "a", "b"})
            return three_point_load(
                _number(cfg, "load", "F"),
                _number(cfg, "load", "a"),
                _number(cfg, "load", "b"),
            )
        if kind == "forces":
            _block(cfg, "load", {"kind", "forces"}, {"kind", "forces"})
            forces = []
            for i, fc in enumerate(cfg["forces"]):
                name = f"load.forces[{i}]"
                _block(fc, name, {"face", "offset", "magnitude"},
                       {"face", "offset", "magnitude"})
                try:
                    face = Face(fc["face"])
                except ValueError:
                    raise ConfigError(f"{name}.face: expected 'upper' or 'lower'")
                forces.append(PointForce(face, _number(fc, name, "offset"),
                                         _number(fc, name, "magnitude")))
            return LoadSystem(forces=tuple(forces))
    except DomainError as exc:
        raise ConfigError(f"load: {exc}") from exc
    raise ConfigError(f"load.kind: unknown kind {kind!r}")


def _defect_kind(cfg, name):
    try:
        return DefectKind(cfg["kind"])
    except ValueError:
        raise ConfigError(
            f"{name}.kind: expected 'micro_crack' or 'rigid_inclusion', got {cfg['kind']!r}"
        )


def parse_defect(cfg, name, degrees) -> Defect:
    _block(cfg, name, {"kind", "d", "phi", "l", "alpha"},
           {"kind", "d", "phi", "l", "alpha"})
    try:
        return Defect(
            kind=_defect_kind(cfg, name),
            d=_number(cfg, name, "d"),
            phi=_angle(cfg, name, "phi", degrees),
            half_length=_number(cfg, name, "l"),
            alpha=_angle(cfg, name, "alpha", degrees),
        )
    except DomainError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def parse_defects(cfg_list, degrees) -> list[Defect]:
    if not isinstance(cfg_list, list):
        raise ConfigError("defects: expected a list")
    return [parse_defect(c, f"defects[{i}]", degrees) for i, c in enumerate(cfg_list)]


def parse_sweep(cfg) -> list[float]:
    _block(cfg, "sweep", {"a_values", "a_min", "a_max", "count", "spacing"}, set())
    if "a_values" in cfg:
        return [float(a) for a in cfg["a_values"]]
    for key in ("a_min", "a_max", "count"):
        if key not in cfg:
            raise ConfigError(f"sweep.{key}: required without sweep.a_values")
    spacing = cfg.get("spacing", "log")
    if spacing not in ("log", "linear"):
        raise ConfigError(f"sweep.spacing: expected 'log' or 'linear', got {spacing!r}")
    lo, hi = _number(cfg, "sweep", "a_min"), _number(cfg, "sweep", "a_max")
    n = int(cfg["count"])
    if spacing == "log":
        return list(np.geomspace(lo, hi, n))
    return list(np.linspace(lo, hi, n))


def parse_resolution(text) -> tuple[int, int]:
    try:
        n_phi, n_alpha = (int(p) for p in text.lower().split("x"))
    except Exception:
        raise ConfigError(f"resolution: expected 'NxM', got {text!r}")
    return n_phi, n_alpha


def _load_config(path) -> dict:
    if path is None:
        raise ConfigError("--config is required for this command")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})")
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be an object")
    return cfg


def _summary(command, config, results, files):
    return json.dumps(
        {
            "command": command,
            "config": config,
            "results": results,
            "files": [str(f) for f in files],
        },
        sort_keys=True,
        indent=2,
    )


def _run(fn):
    try:
        fn()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except (DomainError, UnsupportedLoadError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except QuadratureError as exc:
        click.echo(f"numeric error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        sys.exit(EXIT_IO)


config_option = click.option("--config", "config_path", type=click.Path(), default=None,
                             help="JSON configuration file.")
out_option = click.option("--out", "out_dir", type=click.Path(), default=".",
                          help="Output directory for generated files.")
degrees_option = click.option("--degrees", is_flag=True,
                              help="Interpret config angles in degrees.")


@click.group()
def main():
    """Mode III interfacial crack SIF and small-defect perturbation toolkit."""


@main.command("sif")
@config_option
@degrees_option
def cmd_sif(config_path, degrees):
    """Unperturbed SIF K0 with its per-force decomposition."""

    def body():
        cfg = _load_config(config_path)
        _block(cfg, "config", {"material", "load"}, {"material", "load"})
        material = parse_material(cfg["material"])
        loads = parse_load(cfg["load"])
        res = sif_total(material, loads)
        click.echo(_summary("sif", cfg, {
            "eta": material.eta,
            "k0": res.total,
            "per_force": list(res.per_force),
            "traction_part": res.traction_part,
        }, []))

    _run(body)


@main.command("delta-k")
@config_option
@degrees_option
def cmd_delta_k(config_path, degrees):
    """Exact dK for a defect set, with the applicable approximations."""

    def body():
        cfg = _load_config(config_path)
        _block(cfg, "config", {"material", "load", "defects"},
               {"material", "load", "defects"})
        material = parse_material(cfg["material"])
        loads = parse_load(cfg["load"])
        defects = parse_defects(cfg["defects"], degrees)
        res = perturbation.delta_k_multi(material, loads, defects)

        approximations = []
        for dft in defects:
            entry = {"simplified_ratio": approx.simplified_ratio(material, dft)}
            if material.eta == 0.0 and dft.kind is DefectKind.MICRO_CRACK:
                entry["homogeneous_ratio"] = approx.homogeneous_ratio(dft.epsilon, dft.phi, dft.alpha)
            if cfg["load"].get("kind") == "three_point":
                entry["three_point_ratio"] = approx.three_point_ratio(
                    material, dft, float(cfg["load"]["a"]), float(cfg["load"]["b"])
                )
            approximations.append(entry)

        click.echo(_summary("delta-k", cfg, {
            "k0": res.k0,
            "delta_k": res.delta_k,
            "ratio": res.ratio,
            "classification": res.classification.value,
            "per_defect": list(res.per_defect),
            "approximations": approximations,
        }, []))

    _run(body)


@main.command("compare")
@config_option
@out_option
@degrees_option
def cmd_compare(config_path, out_dir, degrees):
    """Sweep a/d and tabulate the approximation error against the exact engine."""

    def body():
        cfg = _load_config(config_path)
        _block(cfg, "config", {"material", "load", "defect", "sweep"},
               {"material", "load", "defect", "sweep"})
        material = parse_material(cfg["material"])
        load_cfg = cfg["load"]
        defect = parse_defect(cfg["defect"], "defect", degrees)
        a_values = parse_sweep(cfg["sweep"])

        kind = load_cfg.get("kind")
        if kind == "two_point":
            _block(load_cfg, "load", {"kind", "F"}, {"kind", "F"})
            family = lambda a: two_point_load(float(load_cfg["F"]), a)
        elif kind == "three_point":
            _block(load_cfg, "load", {"kind", "F", "b"}, {"kind", "F", "b"})
            family = lambda a: three_point_load(float(load_cfg["F"]), a,
                                                float(load_cfg["b"]))
        else:
            raise ConfigError(
                f"load.kind: compare needs 'two_point' or 'three_point', got {kind!r}"
            )

        rows = approx.error_sweep(material, defect, family, a_values)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "compare.csv"
        lines = ["a_over_d,exact_ratio,approx_ratio,relative_error,flagged"]
        for row in rows:
            err = "" if row.relative_error is None else format(row.relative_error, ".17g")
            lines.append(
                f"{row.a_over_d:.17g},{row.exact_ratio:.17g},"
                f"{row.approx_ratio:.17g},{err},{int(row.flagged)}"
            )
        csv_path.write_text("\n".join(lines) + "\n", newline="\n")

        click.echo(_summary("compare", cfg, {
            "max_relative_error": max(
                (r.relative_error for r in rows if r.relative_error is not None),
                default=None,
            ),
            "rows": len(rows),
        }, [csv_path]))

    _run(body)


@main.command("map")
@config_option
@out_option
@degrees_option
@click.option("--resolution", default=None, help="Grid resolution as NxM.")
@click.option("--svg/--no-svg", "want_svg", default=True,
              help="Also render the region map as SVG.")
def cmd_map(config_path, out_dir, degrees, resolution, want_svg):
    """Shielding/amplification map over (phi, alpha) with boundary curves."""

    def body():
        cfg = _load_config(config_path)
        _block(cfg, "config", {"material", "load", "defect", "resolution"},
               {"material", "load", "defect"})
        material = parse_material(cfg["material"])
        loads = parse_load(cfg["load"])
        dcfg = cfg["defect"]
        _block(dcfg, "defect", {"kind", "d", "l"}, {"kind", "d", "l"})
        template = regionmap.DefectTemplate(
            kind=_defect_kind(dcfg, "defect"),
            d=_number(dcfg, "defect", "d"),
            half_length=_number(dcfg, "defect", "l"),
        )
        res_text = resolution or cfg.get("resolution", "720x360")
        grid = regionmap.compute_map(material, loads, template,
                                     parse_resolution(res_text))
        curves = regionmap.extract_boundary(grid)

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = regionmap.ExportPaths(
            grid_csv=out / "map_grid.csv",
            curves_csv=out / "map_boundaries.csv",
            svg=(out / "map.svg") if want_svg else None,
        )
        written = regionmap.export_map(grid, curves, paths)

        signs = grid.signs
        click.echo(_summary("map", cfg, {
            "resolution": list(grid.values.shape),
            "boundary_curves": len(curves),
            "shielding_nodes": int(np.sum(signs < 0)),
            "amplification_nodes": int(np.sum(signs > 0)),
        }, written))

    _run(body)


@main.command("validate")
def cmd_validate():
    """Run the built-in invariant suite (quick numerical self-checks)."""

    def body():
        checks = _builtin_checks()
        ok = all(passed for _, passed, _ in checks)
        click.echo(_summary("validate", {}, {
            "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in checks],
            "all_passed": ok,
        }, []))
        if not ok:
            sys.exit(EXIT_NUMERIC)

    _run(body)


def _builtin_checks():
    from .model import dipole_matrix, make_bimaterial

    rng = np.random.default_rng(7)
    checks = []

    def record(name, passed, detail=""):
        checks.append((name, bool(passed), detail))

    # dipole rotation covariance
    worst = 0.0
    for _ in range(50):
        l = float(rng.uniform(0.01, 2.0))
        a = float(rng.uniform(0.0, np.pi))
        for kind in DefectKind:
            m = dipole_matrix(Defect(kind, 10.0, 1.0, l, a)).entries
            m0 = dipole_matrix(Defect(kind, 10.0, 1.0, l, 0.0)).entries
            rot = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
            worst = max(worst, float(np.max(np.abs(m - rot @ m0 @ rot.T))) / (np.pi * l * l))
    record("dipole_rotation_covariance", worst < 1e-12, f"max residual {worst:.2e}")

    # zero lines
    worst = 0.0
    for _ in range(100):
        mat = make_bimaterial(float(rng.uniform(0.2, 5.0)), float(rng.uniform(0.2, 5.0)))
        loads = two_point_load(float(rng.uniform(0.5, 2.0)), float(rng.uniform(1.0, 50.0)))
        phi = float(rng.uniform(0.1, np.pi - 0.1)) * float(rng.choice([-1, 1]))
        d = float(rng.uniform(0.5, 3.0))
        l = 0.01 * d
        crack = Defect(DefectKind.MICRO_CRACK, d, phi, l, 1.5 * phi + 0.5 * np.pi)
        incl = Defect(DefectKind.RIGID_INCLUSION, d, phi, l, 1.5 * phi)
        ref = abs(perturbation.delta_k(
            mat, loads, Defect(DefectKind.MICRO_CRACK, d, phi, l, 1.5 * phi)).delta_k)
        for dft in (crack, incl):
            worst = max(worst, abs(perturbation.delta_k(mat, loads, dft).delta_k) / ref)
    record("zero_lines", worst < 1e-13, f"max |dK|/scale {worst:.2e}")

    # superposition
    mat = make_bimaterial(1.0, 2.0)
    loads = three_point_load(1.0, 3.0, 1.0)
    defects = [
        Defect(DefectKind.MICRO_CRACK, 1.0, 0.7, 0.01, 0.3),
        Defect(DefectKind.RIGID_INCLUSION, 1.5, -1.1, 0.02, 1.2),
    ]
    multi = perturbation.delta_k_multi(mat, loads, defects)
    singles = sum(perturbation.delta_k(mat, loads, d).delta_k for d in defects)
    err = abs(multi.delta_k - singles) / abs(singles)
    record("superposition", err < 1e-14, f"relative residual {err:.2e}")

    # homogeneous-plane far-field limit
    mat = make_bimaterial(1.0, 1.0)
    dft = Defect(DefectKind.MICRO_CRACK, 1.0, np.pi / 2, 0.01, 0.0)
    exact = perturbation.delta_k(mat, two_point_load(1.0, 1e4), dft).ratio
    ref = approx.homogeneous_ratio(0.01, np.pi / 2, 0.0)
    err = abs(exact - ref) / abs(ref)
    record("homogeneous_limit", err < 1e-3, f"relative error {err:.2e} at a/d = 1e4")

    return checks


if __name__ == "__main__":
    main()
