import math

import numpy as np
import pytest

from spectral_control import (
    NumericError,
    ParameterError,
    ShapeError,
    fourier_coefficient,
    fourier_coefficients,
    gauss_rule,
    inner_product,
    jacobi,
    laguerre,
)
from spectral_control.orthopoly import eval_table

FAMILIES = [laguerre(0.0), laguerre(1.3), jacobi(0.0, 0.0), jacobi(-0.4, 1.5), jacobi(2.0, 3.0)]


class TestGaussRule:
    def test_laguerre_two_point(self):
        rule = gauss_rule(laguerre(0.0), 2)
        s = math.sqrt(2.0)
        assert rule.nodes == pytest.approx([2.0 - s, 2.0 + s], rel=1e-14)
        assert rule.weights == pytest.approx([(2.0 + s) / 4.0, (2.0 - s) / 4.0], rel=1e-14)

    def test_legendre_two_point(self):
        rule = gauss_rule(jacobi(0.0, 0.0), 2)
        assert rule.nodes == pytest.approx([-1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0)], rel=1e-14)
        assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-14)

    @pytest.mark.parametrize("fam", FAMILIES, ids=str)
    def test_one_point_rule_is_the_mean(self, fam):
        from spectral_control import recurrence_coeffs

        rule = gauss_rule(fam, 1)
        assert rule.nodes == pytest.approx([recurrence_coeffs(fam, 1).diag[0]], abs=0.0)
        assert rule.weights == pytest.approx([fam.mass], abs=0.0)

    @pytest.mark.parametrize("fam", FAMILIES, ids=str)
    @pytest.mark.parametrize("m", [1, 2, 5, 16, 64])
    def test_weight_sum_and_positivity(self, fam, m):
        rule = gauss_rule(fam, m)
        assert np.all(rule.weights > 0.0)
        assert abs(rule.weights.sum() - fam.mass) <= 1e-12 * fam.mass
        assert np.all(np.diff(rule.nodes) > 0.0)
        if fam.kind == "laguerre":
            assert np.all(rule.nodes > 0.0)
        else:
            assert np.all(np.abs(rule.nodes) < 1.0)

    @pytest.mark.parametrize("fam", FAMILIES, ids=str)
    @pytest.mark.parametrize("m", [2, 7, 19])
    def test_node_interlacing(self, fam, m):
        inner = gauss_rule(fam, m).nodes
        outer = gauss_rule(fam, m + 1).nodes
        assert all(outer[k] < inner[k] < outer[k + 1] for k in range(m))

    @pytest.mark.parametrize("fam", FAMILIES, ids=str)
    @pytest.mark.parametrize("m", [3, 8, 16])
    def test_exactness_on_random_polynomials(self, fam, m, rng):
        # A polynomial expanded in the orthonormal basis integrates to
        # coeff_0 * sqrt(mass): only the constant term survives.
        rule = gauss_rule(fam, m)
        degree = 2 * m - 1
        table = eval_table(fam, degree, rule.nodes)
        for _ in range(10):
            coeffs = rng.uniform(-1.0, 1.0, size=degree + 1)
            values = coeffs @ table
            exact = coeffs[0] * math.sqrt(fam.mass)
            got = float(np.sum(rule.weights * values))
            assert abs(got - exact) <= 1e-9 * max(1.0, np.abs(coeffs).sum())

    def test_m_out_of_range(self):
        with pytest.raises(ParameterError):
            gauss_rule(laguerre(0.0), 0)
        with pytest.raises(ParameterError):
            gauss_rule(laguerre(0.0), 201)


class TestInnerProduct:
    def test_unit_mass(self):
        rule = gauss_rule(laguerre(0.0), 6)
        assert inner_product(lambda x: 1.0, lambda x: 1.0, rule) == pytest.approx(1.0, abs=1e-14)

    def test_legendre_mass(self):
        rule = gauss_rule(jacobi(0.0, 0.0), 6)
        assert inner_product(lambda x: 1.0, lambda x: 1.0, rule) == pytest.approx(2.0, abs=1e-14)

    def test_orthogonality_p3_p5(self):
        fam = jacobi(0.0, 0.0)
        rule = gauss_rule(fam, 16)
        p3 = lambda x: eval_table(fam, 3, np.asarray(x))[3]
        p5 = lambda x: eval_table(fam, 5, np.asarray(x))[5]
        assert abs(inner_product(p3, p5, rule)) <= 1e-10

    def test_failure_carries_node_index(self):
        rule = gauss_rule(jacobi(0.0, 0.0), 4)

        def bad(x):
            if x > 0:
                raise ValueError("boom")
            return x

        with pytest.raises(NumericError, match="node 2"):
            inner_product(bad, lambda x: 1.0, rule)


class TestFourierCoefficient:
    def test_basis_function_recovers_unit(self):
        fam = jacobi(0.3, 0.3)
        p2 = lambda x: eval_table(fam, 2, np.asarray(x))[2]
        assert fourier_coefficient(p2, [fam], (2,), 12) == pytest.approx(1.0, abs=1e-10)

    def test_linear_b_against_laguerre_p1(self):
        # Sign-resolved with a 2-node exact rule: p_1 = x - 1 under the
        # positive-leading convention, so <x, p_1> = E[x^2] - E[x] = 1.
        fam = laguerre(0.0)
        rule = gauss_rule(fam, 2)
        p1 = lambda x: eval_table(fam, 1, np.asarray(x))[1]
        oracle = float(np.sum(rule.weights * rule.nodes * p1(rule.nodes)))
        assert oracle == pytest.approx(1.0, abs=1e-13)
        assert fourier_coefficient(lambda x: x, [fam], (1,), 8) == pytest.approx(
            oracle, abs=1e-12
        )

    def test_zero_function(self):
        assert fourier_coefficient(lambda x: 0.0, [laguerre(0.0)], (4,), 8) == 0.0

    def test_linearity_in_b(self, rng):
        fams = [jacobi(0.0, 0.0), laguerre(0.5)]
        f = lambda x, y: np.exp(-x) * (1 + y)
        g = lambda x, y: x * y * y
        a, b = rng.uniform(-2, 2, size=2)
        combo = lambda x, y: a * f(x, y) + b * g(x, y)
        for nu in [(0, 0), (1, 2), (3, 1)]:
            want = a * fourier_coefficient(f, fams, nu, 10) + b * fourier_coefficient(
                g, fams, nu, 10
            )
            assert fourier_coefficient(combo, fams, nu, 10) == pytest.approx(want, abs=1e-12)

    def test_separable_b_factors(self):
        fams = [laguerre(0.0), laguerre(1.0)]
        f = lambda x: np.exp(-x / 2)
        g = lambda x: 1.0 + x
        b = lambda x, y: f(x) * g(y)
        for nu in [(0, 0), (2, 1), (3, 3)]:
            prod = fourier_coefficient(f, [fams[0]], (nu[0],), 20) * fourier_coefficient(
                g, [fams[1]], (nu[1],), 20
            )
            assert fourier_coefficient(b, fams, nu, 20) == pytest.approx(prod, abs=1e-9)

    def test_arity_mismatch(self):
        with pytest.raises(ShapeError):
            fourier_coefficient(lambda x, y: x * y, [laguerre(0.0)], (1,), 4)

    def test_dimension_cap(self):
        fams = [jacobi(0.0, 0.0)] * 5
        with pytest.raises(ParameterError):
            fourier_coefficients(lambda *xs: 1.0, fams, [(0,) * 5], 2)

    def test_index_length_mismatch(self):
        with pytest.raises(ShapeError):
            fourier_coefficient(lambda x: x, [laguerre(0.0)], (1, 2), 4)

    def test_batch_matches_single(self):
        fams = [jacobi(0.0, 0.0)]
        b = lambda x: np.exp(x)
        indices = [(0,), (1,), (2,), (5,)]
        batch = fourier_coefficients(b, fams, indices, 12)
        singles = [fourier_coefficient(b, fams, nu, 12) for nu in indices]
        assert batch == pytest.approx(singles, abs=0.0)
