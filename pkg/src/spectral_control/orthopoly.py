"""Orthonormal Laguerre and Jacobi polynomial families in one variable.

Conventions used throughout the package:

- ``laguerre(alpha)``: weight ``x^alpha e^-x / Gamma(alpha+1)`` on ``[0, inf)``;
  the measure is normalized, so its total mass is 1.
- ``jacobi(alpha, beta)``: weight ``(1-x)^alpha (1+x)^beta`` on ``[-1, 1]``,
  unnormalized; total mass ``2^(alpha+beta+1) B(alpha+1, beta+1)``.
- Polynomials are orthonormal under the family measure and carry positive
  leading coefficients, generated by the symmetric three-term recurrence

      x p_k = a_k p_{k+1} + b_k p_k + a_{k-1} p_{k-1},   a_k > 0.

  This differs from the classical Rodrigues normalization by a factor
  ``(-1)^n`` for Laguerre; controllability criteria depend only on
  coefficient magnitudes, so the convention is immaterial there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

LAGUERRE = "laguerre"
JACOBI = "jacobi"

#: Largest polynomial degree supported by forward recurrence in double
#: precision (Laguerre values overflow far beyond this at large x).
MAX_DEGREE = 200


@dataclass(frozen=True)
class PolyFamily1D:
    """One coordinate's family: kind, parameters, and total measure mass."""

    kind: str
    alpha: float
    beta: float | None = None
    mass: float = 1.0

    def __post_init__(self):
        if self.kind not in (LAGUERRE, JACOBI):
            raise ParameterError(f"unknown family kind {self.kind!r}")
        if not self.alpha > -1.0:
            raise ParameterError(f"alpha must exceed -1, got {self.alpha}")
        if self.kind == JACOBI:
            if self.beta is None or not self.beta > -1.0:
                raise ParameterError(f"beta must exceed -1, got {self.beta}")
        elif self.beta is not None:
            raise ParameterError("beta is only meaningful for Jacobi families")
        if not self.mass > 0.0:
            raise ParameterError(f"measure mass must be positive, got {self.mass}")


def laguerre(alpha: float) -> PolyFamily1D:
    """Laguerre family of type ``alpha`` under the normalized Gamma measure."""
    return PolyFamily1D(LAGUERRE, float(alpha), None, 1.0)


def jacobi(alpha: float, beta: float) -> PolyFamily1D:
    """Jacobi family of type ``(alpha, beta)`` under the unnormalized measure."""
    alpha, beta = float(alpha), float(beta)
    if not (alpha > -1.0 and beta > -1.0):
        raise ParameterError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    mass = math.exp(
        (alpha + beta + 1.0) * math.log(2.0)
        + math.lgamma(alpha + 1.0)
        + math.lgamma(beta + 1.0)
        - math.lgamma(alpha + beta + 2.0)
    )
    return PolyFamily1D(JACOBI, alpha, beta, mass)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of the symmetric orthonormal recurrence.

    ``diag`` holds b_0..b_{m-1}, ``offdiag`` holds a_0..a_{m-2}; all
    off-diagonal entries are strictly positive.
    """

    diag: np.ndarray
    offdiag: np.ndarray


def recurrence_coeffs(family: PolyFamily1D, m: int) -> RecurrenceCoeffs:
    """Recurrence coefficients for degrees below ``m``."""
    if m < 1:
        raise ParameterError(f"m must be at least 1, got {m}")
    if m > MAX_DEGREE + 1:
        raise ParameterError(f"m={m} exceeds the degree cap {MAX_DEGREE}")
    if family.kind == LAGUERRE:
        k = np.arange(m, dtype=float)
        diag = 2.0 * k + family.alpha + 1.0
        j = np.arange(1, m, dtype=float)
        offdiag = np.sqrt(j * (j + family.alpha))
    else:
        a, b = family.alpha, family.beta
        diag = np.empty(m)
        diag[0] = (b - a) / (a + b + 2.0)
        if m > 1:
            k = np.arange(1, m, dtype=float)
            s = 2.0 * k + a + b
            diag[1:] = (b * b - a * a) / (s * (s + 2.0))
        offdiag = np.empty(max(m - 1, 0))
        if m > 1:
            # k=1 written out separately: the generic formula is 0/0 at a+b = -1.
            offdiag[0] = math.sqrt(
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
            )
        if m > 2:
            j = np.arange(2, m, dtype=float)
            s = 2.0 * j + a + b
            num = 4.0 * j * (j + a) * (j + b) * (j + a + b)
            offdiag[1:] = np.sqrt(num / (s * s * (s * s - 1.0)))
    diag.setflags(write=False)
    offdiag.setflags(write=False)
    return RecurrenceCoeffs(diag, offdiag)


def _check_support(family: PolyFamily1D, x: np.ndarray) -> None:
    if family.kind == LAGUERRE:
        if np.any(x < 0.0):
            raise DomainError("Laguerre polynomials are defined on x >= 0")
    else:
        if np.any(np.abs(x) > 1.0):
            raise DomainError("Jacobi polynomials are defined on [-1, 1]")


def eval_table(family: PolyFamily1D, n: int, x) -> np.ndarray:
    """Values of p_0..p_n at the points ``x``; shape ``(n+1,) + x.shape``."""
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ParameterError(f"degree {n} exceeds the cap {MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    _check_support(family, x)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0 / math.sqrt(family.mass)
    if n == 0:
        return out
    rc = recurrence_coeffs(family, n + 1)
    b, a = rc.diag, rc.offdiag
    out[1] = (x - b[0]) * out[0] / a[0]
    for k in range(1, n):
        out[k + 1] = ((x - b[k]) * out[k] - a[k - 1] * out[k - 1]) / a[k]
    return out


def eval_orthonormal(family: PolyFamily1D, n: int, x) -> np.ndarray:
    """Values ``(p_0(x), ..., p_n(x))`` of the orthonormal polynomials."""
    return eval_table(family, n, x)


def derivative_tables(family: PolyFamily1D, n: int, x):
    """Tables of values, first, and second derivatives of p_0..p_n at ``x``.

    The recurrence is differentiated term by term, so the results are exact
    for polynomials (no finite differencing).
    """
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ParameterError(f"degree {n} exceeds the cap {MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    _check_support(family, x)
    shape = (n + 1,) + x.shape
    p = np.empty(shape)
    dp = np.zeros(shape)
    ddp = np.zeros(shape)
    p[0] = 1.0 / math.sqrt(family.mass)
    if n == 0:
        return p, dp, ddp
    rc = recurrence_coeffs(family, n + 1)
    b, a = rc.diag, rc.offdiag
    p[1] = (x - b[0]) * p[0] / a[0]
    dp[1] = p[0] / a[0]
    for k in range(1, n):
        p[k + 1] = ((x - b[k]) * p[k] - a[k - 1] * p[k - 1]) / a[k]
        dp[k + 1] = ((x - b[k]) * dp[k] + p[k] - a[k - 1] * dp[k - 1]) / a[k]
        ddp[k + 1] = ((x - b[k]) * ddp[k] + 2.0 * dp[k] - a[k - 1] * ddp[k - 1]) / a[k]
    return p, dp, ddp


def eval_derivatives(family: PolyFamily1D, n: int, x):
    """Return ``(p_n(x), p_n'(x), p_n''(x))``."""
    p, dp, ddp = derivative_tables(family, n, x)
    if np.ndim(x) == 0:
        return float(p[n]), float(dp[n]), float(ddp[n])
    return p[n], dp[n], ddp[n]


def norm_constant(family: PolyFamily1D, n: int) -> float:
    """Squared norm of the classical (unnormalized) degree-n polynomial.

    Laguerre: Gamma(n+alpha+1) / (n! Gamma(alpha+1)) under the normalized
    Gamma measure. Jacobi: the classical constant h_n under the
    unnormalized weight.
    """
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    a = family.alpha
    if family.kind == LAGUERRE:
        return math.exp(math.lgamma(n + a + 1.0) - math.lgamma(n + 1.0) - math.lgamma(a + 1.0))
    b = family.beta
    if n == 0:
        # The closed form reduces to the measure mass; evaluating it this way
        # avoids Gamma at a+b+1, which may be negative for a+b < -1.
        return family.mass
    return math.exp(
        (a + b + 1.0) * math.log(2.0)
        - math.log(2.0 * n + a + b + 1.0)
        + math.lgamma(n + a + 1.0)
        + math.lgamma(n + b + 1.0)
        - math.lgamma(n + 1.0)
        - math.lgamma(n + a + b + 1.0)
    )


def sturm_liouville_residual(family: PolyFamily1D, n: int, x) -> float:
    """Residual of the second-order eigenfunction identity at ``x``.

    Laguerre: ``x p'' + (alpha+1-x) p' + n p``.
    Jacobi: ``(1-x^2) p'' + (beta-alpha-(alpha+beta+2)x) p' + n(n+alpha+beta+1) p``.
    Exact eigenfunctions give zero up to rounding.
    """
    p, dp, ddp = eval_derivatives(family, n, x)
    x = np.asarray(x, dtype=float)
    if family.kind == LAGUERRE:
        res = x * ddp + (family.alpha + 1.0 - x) * dp + n * p
    else:
        a, b = family.alpha, family.beta
        res = (1.0 - x * x) * ddp + (b - a - (a + b + 2.0) * x) * dp + n * (n + a + b + 1.0) * p
    if np.ndim(res) == 0:
        return float(res)
    return res
