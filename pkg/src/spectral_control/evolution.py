"""Truncated diagonal systems: semigroup action, input operator, and the
mild solution under piecewise-constant per-mode controls.

Every operation acts mode by mode in the eigenbasis, so time integrals are
evaluated in closed form and the only numerical error is rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos import ChaosDecomposition, LAGUERRE
from .errors import ContractError, DomainError, ParameterError, ShapeError
from .orthopoly import PolyFamily1D, eval_table
from .quadrature import fourier_coefficients
from .state import SpectralState

PROV_LAGUERRE = "laguerre_tensor"
PROV_JACOBI = "jacobi_tensor"
PROV_ABSTRACT = "abstract"


@dataclass(frozen=True)
class DiagonalSystem:
    """Per-mode eigenvalues and actuation coefficients c = <b, p_nu>.

    Eigenvalues are nonnegative and nondecreasing in storage order; the
    storage order follows the decomposition contract for tensor systems.
    """

    lambdas: np.ndarray
    c: np.ndarray
    labels: tuple
    provenance: str

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if lam.ndim != 1 or c.ndim != 1 or lam.shape != c.shape:
            raise ShapeError("lambdas and c must be one-dimensional and equal length")
        if len(self.labels) != len(lam):
            raise ShapeError("labels must match the mode count")
        if len(lam) == 0:
            raise ShapeError("a system needs at least one mode")
        if np.any(lam < 0.0) or not np.all(np.isfinite(lam)):
            raise ParameterError("eigenvalues must be finite and nonnegative")
        if np.any(np.diff(lam) < 0.0):
            raise ParameterError("eigenvalues must be nondecreasing in storage order")
        if not np.all(np.isfinite(c)):
            raise ParameterError("actuation coefficients must be finite")
        lam = lam.copy()
        c = c.copy()
        lam.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def size(self) -> int:
        return len(self.lambdas)

    def distinct_levels(self) -> list[float]:
        """Distinct eigenvalues in ascending order (exact-equality grouping)."""
        out: list[float] = []
        for lam in self.lambdas:
            if not out or lam != out[-1]:
                out.append(float(lam))
        return out


def abstract_system(modes) -> DiagonalSystem:
    """System from explicit (lambda, c) pairs, in nondecreasing-lambda order."""
    lambdas = []
    cs = []
    for mode in modes:
        if isinstance(mode, dict):
            lambdas.append(float(mode["lambda"]))
            cs.append(float(mode["c"]))
        else:
            lam, c = mode
            lambdas.append(float(lam))
            cs.append(float(c))
    labels = tuple(range(len(lambdas)))
    return DiagonalSystem(np.array(lambdas), np.array(cs), labels, PROV_ABSTRACT)


def _check_families(decomposition: ChaosDecomposition, families) -> None:
    if len(families) != decomposition.d:
        raise ShapeError(
            f"{len(families)} families given for a {decomposition.d}-dimensional decomposition"
        )
    for i, fam in enumerate(families):
        if fam.kind != decomposition.kind:
            raise ParameterError(f"axis {i}: family kind {fam.kind!r} does not match "
                                 f"the {decomposition.kind!r} decomposition")
        if decomposition.alpha is not None and fam.alpha != decomposition.alpha[i]:
            raise ParameterError(f"axis {i}: alpha mismatch with the decomposition")
        if decomposition.beta is not None and fam.beta != decomposition.beta[i]:
            raise ParameterError(f"axis {i}: beta mismatch with the decomposition")


def tensor_system(
    decomposition: ChaosDecomposition,
    families: list[PolyFamily1D],
    b,
    quad_points: int,
) -> DiagonalSystem:
    """Tensor system with c computed by quadrature against ``b``."""
    _check_families(decomposition, families)
    indices = decomposition.indices()
    c = fourier_coefficients(b, families, indices, quad_points)
    lam = decomposition.mode_eigenvalues()
    prov = PROV_LAGUERRE if decomposition.kind == LAGUERRE else PROV_JACOBI
    return DiagonalSystem(lam, c, tuple(indices), prov)


def system_from_coefficients(decomposition: ChaosDecomposition, coeffs) -> DiagonalSystem:
    """Tensor system with c given directly as b's expansion coefficients."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or len(coeffs) > decomposition.size:
        raise ShapeError(
            f"{len(coeffs)} coefficients given for {decomposition.size} modes"
        )
    c = np.zeros(decomposition.size)
    c[: len(coeffs)] = coeffs
    lam = decomposition.mode_eigenvalues()
    prov = PROV_LAGUERRE if decomposition.kind == LAGUERRE else PROV_JACOBI
    return DiagonalSystem(lam, c, tuple(decomposition.indices()), prov)


@dataclass(frozen=True)
class ControlSignal:
    """Piecewise-constant per-mode control on a time grid spanning [0, t1]."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or len(grid) < 2:
            raise ShapeError("grid must hold at least two breakpoints")
        if np.any(np.diff(grid) <= 0.0):
            raise ContractError("grid breakpoints must be strictly increasing")
        if values.ndim != 2 or values.shape[0] != len(grid) - 1:
            raise ShapeError(
                f"values must have shape (segments, modes); got {values.shape} "
                f"for {len(grid) - 1} segments"
            )
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise ContractError("grid and values must be finite")
        grid = grid.copy()
        values = values.copy()
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def segments(self) -> int:
        return self.values.shape[0]

    @property
    def mode_count(self) -> int:
        return self.values.shape[1]

    @property
    def t1(self) -> float:
        return float(self.grid[-1])

    def energy(self) -> float:
        """Squared L2 norm over time, summed across modes."""
        dt = np.diff(self.grid)
        return float(np.sum(self.values * self.values * dt[:, None]))

    def to_json(self) -> dict:
        return {
            "grid": [float(t) for t in self.grid],
            "values": [[float(v) for v in row] for row in self.values],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ControlSignal":
        return cls(np.asarray(data["grid"], float), np.asarray(data["values"], float))

    def csv_rows(self):
        """Rows (t_start, t_end, mode_index, value), segment-major order."""
        for k in range(self.segments):
            for j in range(self.mode_count):
                yield (
                    float(self.grid[k]),
                    float(self.grid[k + 1]),
                    j,
                    float(self.values[k, j]),
                )


def _check_state(system: DiagonalSystem, state: SpectralState) -> None:
    if len(state) != system.size:
        raise ShapeError(
            f"state has {len(state)} coefficients, system has {system.size} modes"
        )


def semigroup_apply(system: DiagonalSystem, state: SpectralState, t: float) -> SpectralState:
    """Multiply coefficient nu by exp(-lambda_nu t)."""
    if t < 0.0:
        raise DomainError(f"the semigroup is defined for t >= 0, got t={t}")
    _check_state(system, state)
    return SpectralState(state.coeffs * np.exp(-system.lambdas * t))


def apply_B(system: DiagonalSystem, u) -> SpectralState:
    """Input operator: coefficient nu of the result is u_nu * c_nu."""
    u = np.asarray(u, dtype=float)
    if u.shape != (system.size,):
        raise ShapeError(f"control vector has shape {u.shape}, expected ({system.size},)")
    return SpectralState(system.c * u)


def apply_B_star(system: DiagonalSystem, state: SpectralState) -> np.ndarray:
    """Adjoint of the input operator: (c_nu * z_nu) per mode."""
    _check_state(system, state)
    return system.c * state.coeffs


def _segment_integrals(lambdas: np.ndarray, grid: np.ndarray, t1: float) -> np.ndarray:
    """I[k, nu] = integral of exp(-lambda_nu (t1 - s)) over segment k, closed form."""
    expo = np.exp(-np.outer(t1 - grid, lambdas))
    dt = np.diff(grid)
    positive = lambdas > 0.0
    safe = np.where(positive, lambdas, 1.0)
    return np.where(positive, (expo[1:] - expo[:-1]) / safe, dt[:, None])


def mild_solution(
    system: DiagonalSystem, z0: SpectralState, u: ControlSignal, t1: float
) -> SpectralState:
    """Terminal state at t1 from z0 under the piecewise-constant control."""
    if t1 <= 0.0:
        raise ContractError(f"t1 must be positive, got {t1}")
    _check_state(system, z0)
    if u.mode_count != system.size:
        raise ShapeError(
            f"control drives {u.mode_count} modes, system has {system.size}"
        )
    if u.grid[0] != 0.0 or abs(u.t1 - t1) > 1e-12 * max(1.0, abs(t1)):
        raise ContractError(
            f"control grid spans [{u.grid[0]}, {u.t1}], expected [0, {t1}]"
        )
    integrals = _segment_integrals(system.lambdas, u.grid, t1)
    forced = np.sum(u.values * integrals, axis=0)
    free = np.exp(-system.lambdas * t1) * z0.coeffs
    return SpectralState(free + system.c * forced)


def truncation_gap(system: DiagonalSystem, levels_kept: int, t: float) -> float:
    """Operator norm of the semigroup minus its truncation to the first
    ``levels_kept + 1`` distinct eigenvalue levels.

    For a diagonal semigroup this is the largest exp(-lambda t) over the
    dropped modes, i.e. exp(-lambda_{k+1} t): the truncations converge
    uniformly, at a rate set by the first dropped eigenvalue.
    """
    if t < 0.0:
        raise DomainError(f"the semigroup is defined for t >= 0, got t={t}")
    levels = system.distinct_levels()
    if levels_kept >= len(levels) - 1:
        return 0.0
    if levels_kept < 0:
        dropped = np.ones(system.size, dtype=bool)
    else:
        dropped = system.lambdas > levels[levels_kept]
    return float(np.max(np.exp(-system.lambdas[dropped] * t)))


def reconstruct(
    state: SpectralState,
    decomposition: ChaosDecomposition,
    families: list[PolyFamily1D],
    points,
) -> np.ndarray:
    """Evaluate z(x) = sum_nu z_nu prod_i p_{nu_i}(x_i) at each point."""
    if len(state) != decomposition.size:
        raise ShapeError(
            f"state has {len(state)} coefficients, decomposition has {decomposition.size} modes"
        )
    _check_families(decomposition, families)
    d = decomposition.d
    pts = np.asarray(points, dtype=float)
    if d == 1 and pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ShapeError(f"points must have shape (npts, {d}), got {pts.shape}")
    for k in range(pts.shape[0]):
        for i, fam in enumerate(families):
            x = pts[k, i]
            ok = x >= 0.0 if fam.kind == LAGUERRE else abs(x) <= 1.0
            if not ok:
                raise DomainError(f"point {k} lies outside the support on axis {i}")
    indices = decomposition.indices()
    maxdeg = [max(nu[i] for nu in indices) for i in range(d)]
    tables = [eval_table(fam, maxdeg[i], pts[:, i]) for i, fam in enumerate(families)]
    out = np.zeros(pts.shape[0])
    for pos, nu in enumerate(indices):
        term = state.coeffs[pos] * tables[0][nu[0]]
        for i in range(1, d):
            term = term * tables[i][nu[i]]
        out += term
    return out
