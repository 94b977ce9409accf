"""Coefficient vectors in the orthonormal eigenbasis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class SpectralState:
    """A state's coefficient sequence, ordered by the decomposition contract
    (levels ascending, members lexicographic)."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 1:
            raise ShapeError(f"coefficients must be one-dimensional, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ShapeError("coefficients must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return len(self.coeffs)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs * self.coeffs)))

    @classmethod
    def zeros(cls, m: int) -> "SpectralState":
        return cls(np.zeros(m))

    def to_json(self) -> dict:
        return {"coeffs": [float(v) for v in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "SpectralState":
        return cls(np.asarray(data["coeffs"], dtype=float))
