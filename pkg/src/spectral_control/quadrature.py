"""Gauss quadrature for Laguerre and Jacobi measures, via Golub-Welsch.

Nodes are the eigenvalues of the symmetric tridiagonal matrix assembled from
the orthonormal recurrence coefficients; the weight of node k is the measure
mass times the squared first component of the k-th normalized eigenvector.
All summations run in a fixed order so results are reproducible across runs
and thread counts.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericError, ParameterError, ShapeError
from .orthopoly import PolyFamily1D, derivative_tables, eval_table, recurrence_coeffs

#: Hard cap on nodes per axis; matches the polynomial degree cap.
MAX_NODES = 200

#: Tensor-product grids are capped at this many axes (full grids, no sparsity).
MAX_TENSOR_DIM = 4


@dataclass(frozen=True)
class QuadRule:
    """Gauss rule for a one-dimensional family measure.

    ``nodes`` are strictly increasing and lie inside the support;
    ``weights`` are positive and sum to the measure mass.
    """

    family: PolyFamily1D
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)


def gauss_rule(family: PolyFamily1D, m: int) -> QuadRule:
    """m-point Gauss rule for the family measure.

    Exact for polynomials of degree <= 2m-1. Nodes are the eigenvalues of
    the symmetric tridiagonal recurrence matrix, polished by two Newton
    steps on p_m; the weight at node x is mass times the squared first
    component of the normalized eigenvector, evaluated through the
    recurrence as 1 / sum_j p_j(x)^2. The eigenvector components reported
    by LAPACK lose relative accuracy at extreme Laguerre nodes, where the
    polynomials are huge; the recurrence form does not.
    """
    if not 1 <= m <= MAX_NODES:
        raise ParameterError(f"node count must be in 1..{MAX_NODES}, got {m}")
    rc = recurrence_coeffs(family, m)
    if m == 1:
        nodes = np.array([rc.diag[0]])
        weights = np.array([family.mass])
    else:
        try:
            nodes = scipy.linalg.eigvalsh_tridiagonal(rc.diag, rc.offdiag)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise NumericError(f"tridiagonal eigensolver failed for m={m}") from exc
        for _ in range(2):
            p, dp, _ = derivative_tables(family, m, nodes)
            nodes = nodes - p[m] / dp[m]
        if np.any(np.diff(nodes) <= 0.0):
            raise NumericError(f"Gauss nodes failed to separate for m={m}")
        table = eval_table(family, m - 1, nodes)
        with np.errstate(over="ignore"):
            christoffel = np.sum(table * table, axis=0)
        weights = np.empty_like(nodes)
        finite = np.isfinite(christoffel)
        weights[finite] = 1.0 / christoffel[finite]
        for k in np.nonzero(~finite)[0]:
            # Rescale before squaring; weights this small may still round
            # to zero, which is the best double precision can represent.
            top = np.max(np.abs(table[:, k]))
            scaled = np.sum((table[:, k] / top) ** 2)
            weights[k] = np.exp(-(2.0 * np.log(top) + np.log(scaled)))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(family, nodes, weights)


def _values_at_nodes(f, nodes: np.ndarray, what: str) -> np.ndarray:
    """Evaluate a callable at all nodes, vectorized when possible.

    A failure in the per-node path is reported with the node index.
    """
    try:
        vals = np.asarray(f(nodes), dtype=float)
        if vals.shape == nodes.shape:
            return vals
    except Exception:
        pass
    out = np.empty_like(nodes)
    for k, xk in enumerate(nodes):
        try:
            out[k] = float(f(xk))
        except Exception as exc:
            raise NumericError(f"evaluation of {what} failed at node {k} (x={xk})") from exc
    return out


def inner_product(f, g, rule: QuadRule) -> float:
    """Quadrature inner product of two functions under the rule's measure."""
    fv = _values_at_nodes(f, rule.nodes, "f")
    gv = _values_at_nodes(g, rule.nodes, "g")
    return float(np.sum(rule.weights * fv * gv))


def _check_arity(b, d: int) -> None:
    try:
        sig = inspect.signature(b)
    except (TypeError, ValueError):
        return
    params = list(sig.parameters.values())
    if any(p.kind == p.VAR_POSITIONAL for p in params):
        return
    positional = [
        p for p in params if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD)
    ]
    required = sum(1 for p in positional if p.default is p.empty)
    if d < required or d > len(positional):
        raise ShapeError(f"b takes {len(positional)} coordinate(s), expected {d}")


def _grid_values(b, grids: list[np.ndarray]) -> np.ndarray:
    try:
        vals = np.asarray(b(*grids), dtype=float)
        if vals.shape == grids[0].shape:
            return vals
    except ShapeError:
        raise
    except Exception:
        pass
    shape = grids[0].shape
    out = np.empty(shape)
    for k, idx in enumerate(np.ndindex(shape)):
        point = tuple(float(g[idx]) for g in grids)
        try:
            out[idx] = float(b(*point))
        except Exception as exc:
            raise NumericError(
                f"evaluation of b failed at grid node {k} (indices {idx}, x={point})"
            ) from exc
    return out


def fourier_coefficients(
    b, families: list[PolyFamily1D], indices, m: int
) -> np.ndarray:
    """Coefficients <b, p_nu> for all multi-indices ``nu`` in ``indices``.

    Tensor-product Gauss quadrature with ``m`` nodes per axis; the grid is
    evaluated once and each coefficient is reduced over the lexicographically
    ordered node grid.
    """
    d = len(families)
    if d < 1:
        raise ParameterError("at least one family is required")
    if d > MAX_TENSOR_DIM:
        raise ParameterError(f"tensor quadrature is capped at d={MAX_TENSOR_DIM}, got {d}")
    indices = [tuple(int(v) for v in nu) for nu in indices]
    for nu in indices:
        if len(nu) != d:
            raise ShapeError(f"multi-index {nu} has length {len(nu)}, expected {d}")
        if any(v < 0 for v in nu):
            raise ParameterError(f"multi-index entries must be nonnegative, got {nu}")
    _check_arity(b, d)

    rules = [gauss_rule(fam, m) for fam in families]
    grids = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    core = rules[0].weights
    for r in rules[1:]:
        core = np.multiply.outer(core, r.weights)
    core = core * _grid_values(b, grids)

    maxdeg = [max((nu[i] for nu in indices), default=0) for i in range(d)]
    tables = [eval_table(fam, maxdeg[i], rules[i].nodes) for i, fam in enumerate(families)]

    out = np.empty(len(indices))
    for j, nu in enumerate(indices):
        pgrid = tables[0][nu[0]]
        for i in range(1, d):
            pgrid = np.multiply.outer(pgrid, tables[i][nu[i]])
        out[j] = np.sum(core * pgrid)
    return out


def fourier_coefficient(b, families: list[PolyFamily1D], nu, m: int) -> float:
    """Single coefficient <b, p_nu> under the product measure."""
    return float(fourier_coefficients(b, families, [nu], m)[0])
