"""Experiment configuration: parsing, validation, presets, and assembly of
systems and states from a config.

Configs are JSON objects with a fixed field set; unknown fields are rejected
so a typo cannot silently change an experiment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import chaos, exprparse
from .errors import ConfigError, ExprError, ParameterError, ShapeError
from .evolution import (
    DiagonalSystem,
    abstract_system,
    system_from_coefficients,
    tensor_system,
)
from .orthopoly import PolyFamily1D, jacobi, laguerre
from .quadrature import fourier_coefficients
from .state import SpectralState

FAMILIES = ("laguerre", "jacobi", "abstract")

KNOWN_FIELDS = {
    "family",
    "d",
    "alpha",
    "beta",
    "max_level",
    "degree_cap",
    "quad_points",
    "t1",
    "tau",
    "b_expr",
    "b_coeffs",
    "abstract_modes",
    "z0_coeffs",
    "z0_expr",
    "z1_coeffs",
    "z1_expr",
    "segments",
    "out_dir",
    "eval_points",
}

DEFAULT_QUAD_POINTS = 32
DEFAULT_SEGMENTS = 8


@dataclass
class ExperimentConfig:
    family: str
    d: int | None = None
    alpha: list | None = None
    beta: list | None = None
    max_level: int | None = None
    degree_cap: int | None = None
    quad_points: int = DEFAULT_QUAD_POINTS
    t1: float | None = None
    tau: float | None = None
    b_expr: str | None = None
    b_coeffs: list | None = None
    abstract_modes: list | None = None
    z0_coeffs: list | None = None
    z0_expr: str | None = None
    z1_coeffs: list | None = None
    z1_expr: str | None = None
    segments: int = DEFAULT_SEGMENTS
    out_dir: str | None = None
    eval_points: list | None = None


def _require_int(data: dict, key: str, minimum: int) -> int:
    value = data[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{key!r} must be an integer >= {minimum}, got {value!r}")
    return value


def _float_list(data: dict, key: str) -> list[float]:
    value = data[key]
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ConfigError(f"{key!r} must be an array of numbers")
    return [float(v) for v in value]


def parse_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("the config must be a JSON object")
    unknown = sorted(set(data) - KNOWN_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
    family = data.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"'family' must be one of {FAMILIES}, got {family!r}")
    cfg = ExperimentConfig(family=family)

    b_fields = [k for k in ("b_expr", "b_coeffs", "abstract_modes") if k in data]
    if len(b_fields) != 1:
        raise ConfigError(
            "exactly one of 'b_expr', 'b_coeffs', 'abstract_modes' must be present"
        )

    if family == "abstract":
        if b_fields != ["abstract_modes"]:
            raise ConfigError("an abstract system is specified via 'abstract_modes'")
        modes = data["abstract_modes"]
        if not isinstance(modes, list) or not modes:
            raise ConfigError("'abstract_modes' must be a nonempty array")
        parsed = []
        for k, mode in enumerate(modes):
            if not isinstance(mode, dict) or set(mode) != {"lambda", "c"}:
                raise ConfigError(
                    f"abstract mode {k} must be an object with exactly "
                    "'lambda' and 'c'"
                )
            lam, c = float(mode["lambda"]), float(mode["c"])
            if lam < 0.0:
                raise ConfigError(f"abstract mode {k}: 'lambda' must be nonnegative")
            parsed.append({"lambda": lam, "c": c})
        for k in range(1, len(parsed)):
            if parsed[k]["lambda"] < parsed[k - 1]["lambda"]:
                raise ConfigError(
                    "'abstract_modes' must be sorted by nondecreasing lambda"
                )
        cfg.abstract_modes = parsed
        for key in ("d", "alpha", "beta", "max_level", "degree_cap"):
            if key in data:
                raise ConfigError(f"{key!r} does not apply to an abstract system")
    else:
        if b_fields == ["abstract_modes"]:
            raise ConfigError("'abstract_modes' requires family 'abstract'")
        if "d" not in data:
            raise ConfigError("'d' is required for tensor families")
        cfg.d = _require_int(data, "d", 1)
        if "alpha" not in data:
            raise ConfigError("'alpha' is required for tensor families")
        cfg.alpha = _float_list(data, "alpha")
        if len(cfg.alpha) != cfg.d:
            raise ConfigError(f"'alpha' must have d={cfg.d} entries")
        if family == "jacobi":
            if "beta" not in data:
                raise ConfigError("'beta' is required for Jacobi families")
            cfg.beta = _float_list(data, "beta")
            if len(cfg.beta) != cfg.d:
                raise ConfigError(f"'beta' must have d={cfg.d} entries")
            if "degree_cap" not in data:
                raise ConfigError("'degree_cap' is required for Jacobi families")
            cfg.degree_cap = _require_int(data, "degree_cap", 0)
            if "max_level" in data:
                raise ConfigError("'max_level' applies to Laguerre; use 'degree_cap'")
        else:
            if "beta" in data:
                raise ConfigError("'beta' applies to Jacobi families only")
            if "max_level" not in data:
                raise ConfigError("'max_level' is required for Laguerre families")
            cfg.max_level = _require_int(data, "max_level", 0)
            if "degree_cap" in data:
                raise ConfigError("'degree_cap' applies to Jacobi; use 'max_level'")
        if "b_expr" in data:
            if not isinstance(data["b_expr"], str):
                raise ConfigError("'b_expr' must be a string")
            cfg.b_expr = data["b_expr"]
        else:
            cfg.b_coeffs = _float_list(data, "b_coeffs")

    if "quad_points" in data:
        cfg.quad_points = _require_int(data, "quad_points", 1)
    if "segments" in data:
        cfg.segments = _require_int(data, "segments", 1)
    if "t1" in data:
        t1 = data["t1"]
        if not isinstance(t1, (int, float)) or isinstance(t1, bool) or not t1 > 0:
            raise ConfigError(f"'t1' must be a positive number, got {t1!r}")
        cfg.t1 = float(t1)
    if "tau" in data:
        tau = data["tau"]
        if not isinstance(tau, (int, float)) or isinstance(tau, bool) or not tau > 0:
            raise ConfigError(f"'tau' must be a positive number, got {tau!r}")
        cfg.tau = float(tau)
    for key in ("z0_coeffs", "z1_coeffs"):
        if key in data:
            setattr(cfg, key, _float_list(data, key))
    for key in ("z0_expr", "z1_expr"):
        if key in data:
            if not isinstance(data[key], str):
                raise ConfigError(f"{key!r} must be a string")
            setattr(cfg, key, data[key])
    for prefix in ("z0", "z1"):
        if getattr(cfg, f"{prefix}_coeffs") is not None and getattr(cfg, f"{prefix}_expr") is not None:
            raise ConfigError(f"give either '{prefix}_coeffs' or '{prefix}_expr', not both")
        if getattr(cfg, f"{prefix}_expr") is not None and family == "abstract":
            raise ConfigError(f"'{prefix}_expr' does not apply to an abstract system")
    if "eval_points" in data:
        cfg.eval_points = _float_list(data, "eval_points")
    if "out_dir" in data:
        if not isinstance(data["out_dir"], str):
            raise ConfigError("'out_dir' must be a string")
        cfg.out_dir = data["out_dir"]
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


def _cir_alpha(dof: int) -> float:
    # Generator of the squared-Bessel/CIR diffusion with `dof` degrees of
    # freedom: the one-dimensional Laguerre operator with alpha = dof/2 - 1.
    return dof / 2.0 - 1.0


def preset_data(name: str) -> dict:
    if name == "laguerre-1d-cir":
        return {
            "family": "laguerre",
            "d": 1,
            "alpha": [_cir_alpha(3)],
            "max_level": 12,
            "quad_points": 48,
            "t1": 1.0,
            "segments": 8,
            "b_expr": "exp(-x/2)",
            "z1_coeffs": [1.0, 0.5, 0.25],
        }
    if name == "legendre-2d":
        return {
            "family": "jacobi",
            "d": 2,
            "alpha": [0.0, 0.0],
            "beta": [0.0, 0.0],
            "degree_cap": 3,
            "quad_points": 16,
            "t1": 1.0,
            "segments": 6,
            "b_expr": "exp((x1 + x2)/2)",
            "z1_coeffs": [1.0, -0.5, 0.5],
        }
    if name == "bessel-abstract":
        return {
            "family": "abstract",
            "t1": 1.0,
            "segments": 8,
            "abstract_modes": [
                {"lambda": float(n * (n + 1)), "c": 1.0 / (n + 1)} for n in range(11)
            ],
            "z1_coeffs": [1.0, 0.5],
        }
    raise ConfigError(
        f"unknown preset {name!r}; available: laguerre-1d-cir, legendre-2d, bessel-abstract"
    )


PRESET_NAMES = ("laguerre-1d-cir", "legendre-2d", "bessel-abstract")


def preset_config(name: str) -> ExperimentConfig:
    return parse_config(preset_data(name))


def build_families(cfg: ExperimentConfig) -> list[PolyFamily1D]:
    if cfg.family == "laguerre":
        return [laguerre(a) for a in cfg.alpha]
    if cfg.family == "jacobi":
        return [jacobi(a, b) for a, b in zip(cfg.alpha, cfg.beta)]
    raise ConfigError("an abstract system has no polynomial families")


def build_decomposition(cfg: ExperimentConfig) -> chaos.ChaosDecomposition:
    if cfg.family == "laguerre":
        return chaos.laguerre_levels(cfg.d, cfg.max_level)
    if cfg.family == "jacobi":
        return chaos.jacobi_levels(cfg.d, cfg.alpha, cfg.beta, cfg.degree_cap)
    raise ConfigError("an abstract system has no chaos decomposition")


def _expression_function(source: str, d: int):
    try:
        ast = exprparse.parse(source, d)
    except ExprError as exc:
        raise ConfigError(f"invalid expression {source!r}: {exc}") from exc
    return exprparse.as_function(ast)


def build_system(cfg: ExperimentConfig):
    """Assemble (system, decomposition, families); the latter two are None
    for abstract systems."""
    if cfg.family == "abstract":
        return abstract_system(cfg.abstract_modes), None, None
    families = build_families(cfg)
    decomposition = build_decomposition(cfg)
    if cfg.b_coeffs is not None:
        if len(cfg.b_coeffs) > decomposition.size:
            raise ConfigError(
                f"'b_coeffs' has {len(cfg.b_coeffs)} entries for "
                f"{decomposition.size} modes"
            )
        system = system_from_coefficients(decomposition, cfg.b_coeffs)
    else:
        b = _expression_function(cfg.b_expr, cfg.d)
        system = tensor_system(decomposition, families, b, cfg.quad_points)
    return system, decomposition, families


def build_state(cfg: ExperimentConfig, which: str, system, decomposition, families):
    """State z0 or z1 from the config; z0 defaults to zero, z1 to None."""
    coeffs = getattr(cfg, f"{which}_coeffs")
    expr = getattr(cfg, f"{which}_expr")
    if coeffs is not None:
        if len(coeffs) > system.size:
            raise ConfigError(
                f"'{which}_coeffs' has {len(coeffs)} entries for {system.size} modes"
            )
        out = np.zeros(system.size)
        out[: len(coeffs)] = coeffs
        return SpectralState(out)
    if expr is not None:
        fn = _expression_function(expr, cfg.d)
        try:
            values = fourier_coefficients(
                fn, families, decomposition.indices(), cfg.quad_points
            )
        except (ParameterError, ShapeError) as exc:
            raise ConfigError(f"cannot expand '{which}_expr': {exc}") from exc
        return SpectralState(values)
    if which == "z0":
        return SpectralState.zeros(system.size)
    return None
