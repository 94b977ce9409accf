"""Command-line front end.

Usage:
    spectral-control basis   (--config PATH | --preset NAME) [--out DIR]
    spectral-control coeffs  (--config PATH | --preset NAME) [--out DIR]
    spectral-control check   (--config PATH | --preset NAME) [--out DIR]
    spectral-control steer   (--config PATH | --preset NAME) [--out DIR]
    spectral-control gramian (--config PATH | --preset NAME) [--out DIR]

Every command writes JSON and CSV results into the output directory and, by
default, a PNG figure next to them (suppress with --no-figures). Outputs are
byte-identical across runs for a fixed config. The environment variable
SPECTRAL_CONTROL_THREADS (a positive integer) caps worker parallelism; all
reductions run in a fixed order, so it never changes results.

Exit codes: 0 success / certified; 1 configuration or expression error;
2 negative analysis outcome (not certified, unreachable target); 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import plots
from .control import (
    VERDICT_CERTIFIED,
    certify_approx_controllability,
    gramian_spectrum,
    min_norm_steering,
)
from .errors import (
    ConfigError,
    ExprError,
    NumericError,
    SpectralControlError,
    UnreachableTargetError,
)
from .evolution import mild_solution
from .orthopoly import eval_table, recurrence_coeffs
from .quadrature import gauss_rule
from .serialize import fmt_float, label_text, write_csv, write_json

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NEGATIVE = 2
EXIT_NUMERIC = 3


def _read_thread_cap() -> int:
    raw = os.environ.get("SPECTRAL_CONTROL_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(
            f"SPECTRAL_CONTROL_THREADS must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise ConfigError(
            f"SPECTRAL_CONTROL_THREADS must be a positive integer, got {raw!r}"
        )
    return value


def _load(args) -> cfgmod.ExperimentConfig:
    if args.preset is not None:
        return cfgmod.preset_config(args.preset)
    return cfgmod.load_config(args.config)


def _out_dir(args, cfg) -> Path:
    out = args.out or cfg.out_dir or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _require(cfg, field: str, command: str):
    value = getattr(cfg, field)
    if value is None:
        raise ConfigError(f"'{field}' is required by the {command} command")
    return value


def cmd_basis(cfg, out: Path, figures: bool) -> int:
    if cfg.family == "abstract":
        raise ConfigError("the basis command needs a Laguerre or Jacobi family")
    families = cfgmod.build_families(cfg)
    max_degree = cfg.max_level if cfg.family == "laguerre" else cfg.degree_cap
    doc = {"families": [], "max_degree": int(max_degree)}
    rows = []
    header = ["axis", "x"] + [f"p{n}" for n in range(max_degree + 1)]
    for i, fam in enumerate(families):
        rc = recurrence_coeffs(fam, max_degree + 1)
        doc["families"].append(
            {
                "kind": fam.kind,
                "alpha": fam.alpha,
                "beta": fam.beta,
                "mass": fam.mass,
                "recurrence": {
                    "diag": [float(v) for v in rc.diag],
                    "offdiag": [float(v) for v in rc.offdiag],
                },
            }
        )
        if cfg.eval_points is not None:
            points = np.asarray(cfg.eval_points, dtype=float)
        else:
            points = gauss_rule(fam, cfg.quad_points).nodes
        table = eval_table(fam, max_degree, points)
        for k, x in enumerate(points):
            rows.append([i, float(x)] + [float(table[n, k]) for n in range(max_degree + 1)])
    write_json(out / "basis.json", doc)
    write_csv(out / "basis.csv", header, rows)
    if figures:
        plots.plot_basis(families, max_degree, out / "basis.png")
    return EXIT_OK


def _coeff_rows(system):
    for j in range(system.size):
        yield (j, label_text(system.labels[j]), float(system.lambdas[j]), float(system.c[j]))


def cmd_coeffs(cfg, out: Path, figures: bool) -> int:
    system, _, _ = cfgmod.build_system(cfg)
    doc = {
        "modes": [
            {
                "mode": j,
                "index": label_text(system.labels[j]),
                "lambda": float(system.lambdas[j]),
                "c": float(system.c[j]),
            }
            for j in range(system.size)
        ]
    }
    write_json(out / "coeffs.json", doc)
    write_csv(out / "coeffs.csv", ["mode_index", "nu", "lambda", "c"], _coeff_rows(system))
    if figures:
        plots.plot_coefficients(system, out / "coeffs.png")
    return EXIT_OK


def cmd_check(cfg, out: Path, figures: bool) -> int:
    system, _, _ = cfgmod.build_system(cfg)
    certificate = certify_approx_controllability(system, cfg.tau)
    write_json(out / "certificate.json", certificate.to_json())
    if figures:
        plots.plot_certificate(system, certificate, out / "certificate.png")
    if certificate.verdict == VERDICT_CERTIFIED:
        return EXIT_OK
    witness = certificate.witness
    print(
        f"not certified: |c| <= {fmt_float(certificate.threshold)} at mode {witness} "
        f"(index {label_text(system.labels[witness])})",
        file=sys.stderr,
    )
    return EXIT_NEGATIVE


def cmd_steer(cfg, out: Path, figures: bool) -> int:
    system, decomposition, families = cfgmod.build_system(cfg)
    t1 = _require(cfg, "t1", "steer")
    z0 = cfgmod.build_state(cfg, "z0", system, decomposition, families)
    z1 = cfgmod.build_state(cfg, "z1", system, decomposition, families)
    if z1 is None:
        raise ConfigError("the steer command needs 'z1_coeffs' or 'z1_expr'")
    plan = min_norm_steering(system, z0, z1, t1, cfg.segments)
    achieved = mild_solution(system, z0, plan.control, t1)
    target_norm = z1.norm()
    error = float(np.sqrt(np.sum((achieved.coeffs - z1.coeffs) ** 2)))
    doc = plan.to_json()
    doc["achieved_terminal_error"] = error
    doc["achieved_terminal_error_relative"] = error / target_norm if target_norm > 0 else error
    write_json(out / "steering.json", doc)
    write_csv(
        out / "control.csv",
        ["t_start", "t_end", "mode_index", "value"],
        plan.control.csv_rows(),
    )
    if figures:
        plots.plot_control(plan, out / "steering.png")
    return EXIT_OK


def cmd_gramian(cfg, out: Path, figures: bool) -> int:
    system, _, _ = cfgmod.build_system(cfg)
    t1 = _require(cfg, "t1", "gramian")
    report = gramian_spectrum(system, t1)
    write_json(out / "gramian.json", report.to_json())
    write_csv(
        out / "gramian.csv",
        ["mode_index", "lambda", "c", "sigma"],
        (
            (j, float(report.mode_lambdas[j]), float(report.mode_c[j]), float(report.mode_sigma[j]))
            for j in range(report.mode_count)
        ),
    )
    if figures:
        plots.plot_gramian(report, out / "gramian.png")
    return EXIT_OK


COMMANDS = {
    "basis": cmd_basis,
    "coeffs": cmd_coeffs,
    "check": cmd_check,
    "steer": cmd_steer,
    "gramian": cmd_gramian,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-control",
        description="Spectral controllability analysis for Laguerre/Jacobi diffusions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--config", help="path to a JSON experiment config")
        group.add_argument(
            "--preset", choices=cfgmod.PRESET_NAMES, help="built-in experiment config"
        )
        p.add_argument("--out", help="output directory (default: config out_dir or '.')")
        p.add_argument(
            "--no-figures",
            action="store_true",
            help="skip PNG rendering; JSON/CSV outputs are unaffected",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _read_thread_cap()
        cfg = _load(args)
        out = _out_dir(args, cfg)
        return COMMANDS[args.command](cfg, out, not args.no_figures)
    except (ConfigError, ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnreachableTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SpectralControlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
