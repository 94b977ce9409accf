"""Multi-index enumeration grouped into eigenvalue levels.

Laguerre levels collect all multi-indices of equal total degree ``|nu| = n``
(eigenvalue n). Jacobi levels group per-axis-capped indices kappa by the
value of ``sum_i kappa_i (kappa_i + alpha_i + beta_i + 1)``, which is not
linear in the degree, so several degrees can share one level.

The flattened mode order -- levels ascending, members lexicographic within a
level -- is the index contract every other module relies on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ParameterError, ShapeError
from .state import SpectralState

LAGUERRE = "laguerre"
JACOBI = "jacobi"

#: Enumerations larger than this raise CapacityError.
MAX_INDICES = 10**6

#: Floating eigenvalues closer than this merge into one level.
MERGE_TOL = 1e-9

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class ChaosLevel:
    """One eigenvalue level: its eigenvalue and member multi-indices.

    ``boundary_incomplete`` marks Jacobi levels whose eigenvalue could also
    be reached by indices outside the per-axis degree cap, so the enumerated
    member set may be truncated.
    """

    eigenvalue: float
    members: tuple[MultiIndex, ...]
    boundary_incomplete: bool = False


@dataclass(frozen=True)
class ChaosDecomposition:
    """Ordered eigenvalue levels partitioning a capped index set."""

    kind: str
    d: int
    alpha: tuple[float, ...] | None
    beta: tuple[float, ...] | None
    degree_cap: int
    levels: tuple[ChaosLevel, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return sum(len(lv.members) for lv in self.levels)

    def indices(self) -> list[MultiIndex]:
        """All multi-indices in contract order."""
        out: list[MultiIndex] = []
        for lv in self.levels:
            out.extend(lv.members)
        return out

    def positions(self) -> dict[MultiIndex, int]:
        """Map from multi-index to its position in the contract order."""
        return {nu: i for i, nu in enumerate(self.indices())}

    def level_positions(self, level_index: int) -> list[int]:
        """Positions occupied by the members of one level."""
        if not 0 <= level_index < len(self.levels):
            raise ShapeError(
                f"level index {level_index} out of range 0..{len(self.levels) - 1}"
            )
        start = sum(len(lv.members) for lv in self.levels[:level_index])
        return list(range(start, start + len(self.levels[level_index].members)))

    def eigenvalues(self) -> np.ndarray:
        return np.array([lv.eigenvalue for lv in self.levels])

    def mode_eigenvalues(self) -> np.ndarray:
        """Per-mode eigenvalue array in contract order."""
        return np.concatenate(
            [np.full(len(lv.members), lv.eigenvalue) for lv in self.levels]
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "alpha": None if self.alpha is None else [float(a) for a in self.alpha],
            "beta": None if self.beta is None else [float(b) for b in self.beta],
            "levels": [
                {
                    "eigenvalue": float(lv.eigenvalue),
                    "members": [[int(v) for v in nu] for nu in lv.members],
                }
                for lv in self.levels
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChaosDecomposition":
        kind = data["kind"]
        d = int(data["d"])
        if kind == LAGUERRE:
            cap = max(int(round(lv["eigenvalue"])) for lv in data["levels"])
            return laguerre_levels(d, cap)
        alpha = [float(a) for a in data["alpha"]]
        beta = [float(b) for b in data["beta"]]
        cap = max(v for lv in data["levels"] for nu in lv["members"] for v in nu)
        return jacobi_levels(d, alpha, beta, cap)


def _compositions(total: int, d: int):
    """Multi-indices with |nu| = total, in lexicographic order."""
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, d - 1):
            yield (first,) + rest


def laguerre_levels(d: int, max_level: int) -> ChaosDecomposition:
    """Total-degree levels n = 0..max_level; level n has C(n+d-1, n) members."""
    if d < 1:
        raise ParameterError(f"dimension must be at least 1, got {d}")
    if max_level < 0:
        raise ParameterError(f"max level must be nonnegative, got {max_level}")
    total = math.comb(max_level + d, d)
    if total > MAX_INDICES:
        raise CapacityError(f"{total} indices exceed the cap of {MAX_INDICES}")
    levels = tuple(
        ChaosLevel(float(n), tuple(_compositions(n, d))) for n in range(max_level + 1)
    )
    return ChaosDecomposition(LAGUERRE, d, None, None, max_level, levels)


def jacobi_levels(d: int, alpha, beta, degree_cap: int) -> ChaosDecomposition:
    """Group all kappa with max kappa_i <= degree_cap by eigenvalue.

    The eigenvalue of kappa is sum_i kappa_i (kappa_i + alpha_i + beta_i + 1);
    values closer than MERGE_TOL merge into one level. Levels whose eigenvalue
    is reachable from outside the cap are flagged boundary_incomplete.
    """
    if d < 1:
        raise ParameterError(f"dimension must be at least 1, got {d}")
    if degree_cap < 0:
        raise ParameterError(f"degree cap must be nonnegative, got {degree_cap}")
    alpha = tuple(float(a) for a in alpha)
    beta = tuple(float(b) for b in beta)
    if len(alpha) != d or len(beta) != d:
        raise ParameterError(f"alpha and beta must each have {d} entries")
    for i in range(d):
        # The grouped decomposition requires parameters above -1/2.
        if not (alpha[i] > -0.5 and beta[i] > -0.5):
            raise ParameterError(
                f"axis {i}: grouped Jacobi levels require alpha, beta > -1/2, "
                f"got ({alpha[i]}, {beta[i]})"
            )
    total = (degree_cap + 1) ** d
    if total > MAX_INDICES:
        raise CapacityError(f"{total} indices exceed the cap of {MAX_INDICES}")

    def eig(kappa: MultiIndex) -> float:
        return sum(k * (k + alpha[i] + beta[i] + 1.0) for i, k in enumerate(kappa))

    items = sorted(
        ((eig(kappa), kappa) for kappa in itertools.product(range(degree_cap + 1), repeat=d)),
        key=lambda item: (item[0], item[1]),
    )
    out_min = min(
        (degree_cap + 1) * (degree_cap + 2 + alpha[i] + beta[i]) for i in range(d)
    )
    levels: list[ChaosLevel] = []
    members: list[MultiIndex] = []
    current = items[0][0]
    for value, kappa in items:
        if value - current > MERGE_TOL:
            levels.append(_make_level(current, members, out_min))
            members = []
            current = value
        members.append(kappa)
    levels.append(_make_level(current, members, out_min))
    return ChaosDecomposition(JACOBI, d, alpha, beta, degree_cap, tuple(levels))


def _make_level(value: float, members: list[MultiIndex], out_min: float) -> ChaosLevel:
    return ChaosLevel(
        float(value),
        tuple(sorted(members)),
        boundary_incomplete=bool(value >= out_min - MERGE_TOL),
    )


def project(
    state: SpectralState, decomposition: ChaosDecomposition, level_index: int
) -> SpectralState:
    """Orthogonal projection onto one level: zero everything outside it."""
    if len(state) != decomposition.size:
        raise ShapeError(
            f"state has {len(state)} coefficients, decomposition has {decomposition.size} modes"
        )
    out = np.zeros(len(state))
    pos = decomposition.level_positions(level_index)
    out[pos] = state.coeffs[pos]
    return SpectralState(out)
