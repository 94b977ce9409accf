"""Controllability analysis and minimum-norm control synthesis.

Because the input operator acts diagonally in the eigenbasis, the
control-to-state map decouples mode by mode. Its per-mode Gramian is

    g_nu = c_nu^2 (1 - exp(-2 lambda_nu t1)) / (2 lambda_nu)

(with the limit c_nu^2 t1 at lambda_nu = 0), and the singular values of the
truncated control operator are sqrt(g_nu). A decay of these singular values
toward zero as modes accumulate is the finite-truncation signature of the
control operator being compact, i.e. of the system never being exactly
controllable; it is reported as evidence, not proved here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractError,
    NumericError,
    ParameterError,
    ShapeError,
    UnderdeterminedError,
    UnreachableTargetError,
)
from .evolution import ControlSignal, DiagonalSystem, mild_solution
from .state import SpectralState

VERDICT_CERTIFIED = "CertifiedUpToTruncation"
VERDICT_NOT_CERTIFIED = "NotCertified"


@dataclass(frozen=True)
class Certificate:
    """Outcome of the truncated approximate-controllability criterion.

    The criterion requires every actuation coefficient to be nonzero; the
    certificate checks |c_nu| > tau on the truncation only, so a positive
    verdict says nothing about modes beyond it.
    """

    threshold: float
    abs_c: np.ndarray
    labels: tuple
    verdict: str
    witness: int | None

    def to_json(self) -> dict:
        return {
            "threshold": float(self.threshold),
            "verdict": self.verdict,
            "witness": None if self.witness is None else int(self.witness),
            "per_mode": [
                {"mode": i, "index": _label_json(lbl), "abs_c": float(v)}
                for i, (lbl, v) in enumerate(zip(self.labels, self.abs_c))
            ],
        }


@dataclass(frozen=True)
class SteeringPlan:
    """Minimum-norm steering result.

    ``eta`` are the per-mode multipliers, ``gramian`` the per-mode g_nu,
    ``control`` the realized piecewise-constant discretization, and
    ``control_energy`` the squared L2 norm of the continuous optimum,
    sum eta_nu^2 g_nu.
    """

    t1: float
    eta: np.ndarray
    gramian: np.ndarray
    control: ControlSignal
    predicted_truncated_error: float
    control_energy: float

    def to_json(self) -> dict:
        return {
            "t1": float(self.t1),
            "eta": [float(v) for v in self.eta],
            "gramian": [float(v) for v in self.gramian],
            "control": self.control.to_json(),
            "predicted_truncated_error": float(self.predicted_truncated_error),
            "control_energy": float(self.control_energy),
        }


@dataclass(frozen=True)
class GramianReport:
    """Singular values of the truncated control operator, sorted descending."""

    t1: float
    singular_values: np.ndarray
    decay_ratio: float
    mode_count: int
    mode_lambdas: np.ndarray
    mode_c: np.ndarray
    mode_sigma: np.ndarray

    def to_json(self) -> dict:
        return {
            "t1": float(self.t1),
            "singular_values": [float(v) for v in self.singular_values],
            "decay_ratio": float(self.decay_ratio),
            "mode_count": int(self.mode_count),
        }


def _label_json(label):
    if isinstance(label, tuple):
        return [int(v) for v in label]
    return int(label)


def default_threshold(system: DiagonalSystem) -> float:
    """1e-12 times the largest |c|: separates structural zeros from
    quadrature noise."""
    top = float(np.max(np.abs(system.c)))
    return 1e-12 * max(top, 1e-300)


def certify_approx_controllability(
    system: DiagonalSystem, tau: float | None = None
) -> Certificate:
    """Check |c_nu| > tau for every mode of the truncation.

    The witness, when present, is the first mode (in storage order) with
    |c_nu| <= tau.
    """
    if tau is None:
        tau = default_threshold(system)
    if not tau > 0.0:
        raise ParameterError(f"tau must be positive, got {tau}")
    abs_c = np.abs(system.c)
    failing = np.nonzero(abs_c <= tau)[0]
    if len(failing) == 0:
        return Certificate(tau, abs_c, system.labels, VERDICT_CERTIFIED, None)
    return Certificate(tau, abs_c, system.labels, VERDICT_NOT_CERTIFIED, int(failing[0]))


def _gramian_diagonal(system: DiagonalSystem, t1: float) -> np.ndarray:
    lam = system.lambdas
    positive = lam > 0.0
    safe = np.where(positive, lam, 1.0)
    factor = np.where(positive, (1.0 - np.exp(-2.0 * lam * t1)) / (2.0 * safe), t1)
    return system.c * system.c * factor


def min_norm_steering(
    system: DiagonalSystem,
    z0: SpectralState,
    z1: SpectralState,
    t1: float,
    segments: int,
) -> SteeringPlan:
    """Steer z0 to z1 at time t1 with the minimum-L2-norm control.

    The continuous optimum for mode nu is
    u_nu(s) = c_nu exp(-lambda_nu (t1-s)) eta_nu with
    eta_nu = (z1_nu - exp(-lambda_nu t1) z0_nu) / g_nu. The returned signal
    holds, on each of ``segments`` uniform subintervals, the
    semigroup-weighted average of that optimum, chosen so each segment's
    contribution to the mild solution matches the continuous control's
    exactly; the discretization therefore still steers the truncated system
    exactly, for any number of segments.
    """
    if t1 <= 0.0:
        raise ContractError(f"t1 must be positive, got {t1}")
    if segments < 1:
        raise ContractError(f"segments must be at least 1, got {segments}")
    if len(z0) != system.size or len(z1) != system.size:
        raise ShapeError("z0 and z1 must match the system's mode count")

    lam, c = system.lambdas, system.c
    free = np.exp(-lam * t1) * z0.coeffs
    delta = z1.coeffs - free
    gram = _gramian_diagonal(system, t1)

    eta = np.zeros(system.size)
    for j in np.nonzero(c == 0.0)[0]:
        if delta[j] != 0.0:
            raise UnreachableTargetError(int(j), system.labels[j])
    steered = c != 0.0
    eta[steered] = delta[steered] / gram[steered]

    grid = np.linspace(0.0, t1, segments + 1)
    # Segment value c*eta*(e^{-lam(t1-t_{k+1})} + e^{-lam(t1-t_k)})/2: the
    # weighted average whose integral against the semigroup kernel matches
    # the continuous optimum on each segment.
    expo = np.exp(-np.outer(t1 - grid, lam))
    values = (c * eta)[None, :] * 0.5 * (expo[1:] + expo[:-1])
    control = ControlSignal(grid, values)

    achieved = mild_solution(system, z0, control, t1)
    residual = float(np.sqrt(np.sum((achieved.coeffs - z1.coeffs) ** 2)))
    energy = float(np.sum(eta * eta * gram))
    return SteeringPlan(float(t1), eta, gram, control, residual, energy)


def gramian_spectrum(system: DiagonalSystem, t1: float) -> GramianReport:
    """Singular values sigma_nu = |c_nu| sqrt((1-exp(-2 lambda_nu t1))/(2 lambda_nu)).

    decay_ratio = sigma_min / sigma_max; a ratio collapsing toward zero as
    the truncation grows is the reported evidence against exact
    controllability.
    """
    if t1 <= 0.0:
        raise ContractError(f"t1 must be positive, got {t1}")
    sigma = np.sqrt(_gramian_diagonal(system, t1))
    sorted_sigma = np.sort(sigma)[::-1]
    top = float(sorted_sigma[0])
    ratio = float(sorted_sigma[-1] / top) if top > 0.0 else 0.0
    return GramianReport(
        float(t1),
        sorted_sigma,
        ratio,
        system.size,
        system.lambdas,
        system.c,
        sigma,
    )


def duality_recover(
    system: DiagonalSystem, observations, grid
) -> SpectralState:
    """Recover z from samples of the adjoint observation c_nu e^{-lambda_nu t} z_nu.

    ``observations`` has shape (K, M): one observed vector per sample time.
    Per mode the unknown is scalar, solved by least squares over the K
    samples; zero observations recover the zero state exactly. A zero c_nu
    makes the corresponding component unobservable.
    """
    grid = np.asarray(grid, dtype=float)
    obs = np.asarray(observations, dtype=float)
    if grid.ndim != 1:
        raise ShapeError("the time grid must be one-dimensional")
    if len(np.unique(grid)) != len(grid):
        raise ContractError("sample times must be distinct")
    if obs.shape != (len(grid), system.size):
        raise ShapeError(
            f"observations must have shape ({len(grid)}, {system.size}), got {obs.shape}"
        )
    zero = np.nonzero(system.c == 0.0)[0]
    if len(zero) > 0:
        j = int(zero[0])
        raise UnderdeterminedError(j, system.labels[j])
    distinct = len(np.unique(system.lambdas))
    if len(grid) < distinct:
        raise ContractError(
            f"{len(grid)} sample times for {distinct} distinct eigenvalues; "
            "need at least as many samples as eigenvalues"
        )
    design = system.c[None, :] * np.exp(-np.outer(grid, system.lambdas))
    denom = np.sum(design * design, axis=0)
    if np.any(denom == 0.0):
        raise NumericError("observation matrix is numerically singular")
    return SpectralState(np.sum(design * obs, axis=0) / denom)
