import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from spectral_control import (
    CapacityError,
    ParameterError,
    ShapeError,
    SpectralState,
    jacobi_levels,
    laguerre_levels,
    project,
)
from spectral_control.chaos import ChaosDecomposition


class TestLaguerreLevels:
    def test_d2_example(self):
        decomp = laguerre_levels(2, 2)
        assert [len(lv.members) for lv in decomp.levels] == [1, 2, 3]
        assert set(decomp.levels[2].members) == {(2, 0), (1, 1), (0, 2)}
        assert [lv.eigenvalue for lv in decomp.levels] == [0.0, 1.0, 2.0]

    def test_d3_level2_size(self):
        assert len(laguerre_levels(3, 2).levels[2].members) == 6

    def test_d1_singletons(self):
        decomp = laguerre_levels(1, 5)
        assert len(decomp.levels) == 6
        assert all(len(lv.members) == 1 for lv in decomp.levels)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_binomial_sizes(self, d):
        decomp = laguerre_levels(d, 10)
        for n, lv in enumerate(decomp.levels):
            assert len(lv.members) == math.comb(n + d - 1, n)

    def test_members_lexicographic_and_correct_degree(self):
        decomp = laguerre_levels(3, 4)
        for n, lv in enumerate(decomp.levels):
            assert list(lv.members) == sorted(lv.members)
            assert all(sum(nu) == n for nu in lv.members)

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            laguerre_levels(6, 30)

    def test_invalid_arguments(self):
        with pytest.raises(ParameterError):
            laguerre_levels(0, 3)
        with pytest.raises(ParameterError):
            laguerre_levels(2, -1)


class TestJacobiLevels:
    def test_legendre_2d_cap3(self):
        decomp = jacobi_levels(2, [0.0, 0.0], [0.0, 0.0], 3)
        eigs = [lv.eigenvalue for lv in decomp.levels]
        sizes = [len(lv.members) for lv in decomp.levels]
        assert eigs[:6] == [0.0, 2.0, 4.0, 6.0, 8.0, 12.0]
        assert sizes[:6] == [1, 2, 1, 2, 2, 3]
        assert set(decomp.levels[5].members) == {(3, 0), (0, 3), (2, 2)}

    def test_legendre_1d_cap4(self):
        decomp = jacobi_levels(1, [0.0], [0.0], 4)
        assert [lv.eigenvalue for lv in decomp.levels] == [0.0, 2.0, 6.0, 12.0, 20.0]
        assert all(len(lv.members) == 1 for lv in decomp.levels)

    def test_parameter_domain(self):
        with pytest.raises(ParameterError):
            jacobi_levels(1, [-0.6], [0.0], 1)
        with pytest.raises(ParameterError):
            jacobi_levels(1, [0.0], [-0.5], 1)

    def test_eigenvalues_strictly_increase(self):
        decomp = jacobi_levels(3, [0.25, 1.0, -0.3], [0.5, 0.0, 0.9], 4)
        eigs = [lv.eigenvalue for lv in decomp.levels]
        assert all(b > a for a, b in zip(eigs, eigs[1:]))

    def test_partition(self):
        decomp = jacobi_levels(2, [0.5, 0.5], [0.25, 0.0], 4)
        seen = [nu for lv in decomp.levels for nu in lv.members]
        assert len(seen) == len(set(seen)) == 25

    @pytest.mark.parametrize(
        "d,alpha,beta,cap",
        [
            (1, (Fraction(1, 3),), (Fraction(1, 4),), 6),
            (2, (Fraction(0), Fraction(1, 2)), (Fraction(0), Fraction(3, 4)), 5),
            (3, (Fraction(-1, 4), Fraction(1, 2), Fraction(2)), (Fraction(3), Fraction(0), Fraction(1, 3)), 4),
        ],
    )
    def test_matches_exact_rational_oracle(self, d, alpha, beta, cap):
        # Brute force with exact rational arithmetic, grouped by exact value.
        groups: dict[Fraction, list] = {}
        for kappa in itertools.product(range(cap + 1), repeat=d):
            r = sum(
                Fraction(k) * (Fraction(k) + alpha[i] + beta[i] + 1)
                for i, k in enumerate(kappa)
            )
            groups.setdefault(r, []).append(kappa)
        want = sorted((float(r), tuple(sorted(m))) for r, m in groups.items())

        decomp = jacobi_levels(d, [float(a) for a in alpha], [float(b) for b in beta], cap)
        got = [(lv.eigenvalue, lv.members) for lv in decomp.levels]
        assert len(got) == len(want)
        for (ge, gm), (we, wm) in zip(got, want):
            assert ge == pytest.approx(we, abs=1e-9)
            assert gm == wm

    def test_boundary_flags(self):
        decomp = jacobi_levels(2, [0.0, 0.0], [0.0, 0.0], 3)
        # Out-of-cap indices reach eigenvalues >= 4*5 = 20: only the top
        # level (24) is flagged; 18 and below are complete.
        flags = {lv.eigenvalue: lv.boundary_incomplete for lv in decomp.levels}
        assert flags[24.0] is True
        assert flags[18.0] is False
        assert flags[0.0] is False

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            jacobi_levels(4, [0.0] * 4, [0.0] * 4, 40)


class TestProject:
    def test_idempotent(self, rng):
        decomp = laguerre_levels(2, 3)
        state = SpectralState(rng.normal(size=decomp.size))
        once = project(state, decomp, 2)
        twice = project(once, decomp, 2)
        assert np.array_equal(once.coeffs, twice.coeffs)

    def test_membership(self):
        decomp = laguerre_levels(2, 2)
        state = SpectralState(np.ones(decomp.size))
        level1 = project(state, decomp, 1)
        positions = decomp.positions()
        nonzero = {i for i in range(decomp.size) if level1.coeffs[i] != 0.0}
        assert nonzero == {positions[(0, 1)], positions[(1, 0)]}

    def test_levels_sum_to_identity(self, rng):
        decomp = jacobi_levels(2, [0.5, 0.0], [0.0, 0.5], 3)
        state = SpectralState(rng.normal(size=decomp.size))
        total = np.zeros(decomp.size)
        for k in range(len(decomp.levels)):
            total += project(state, decomp, k).coeffs
        assert total == pytest.approx(state.coeffs, abs=0.0)

    def test_shape_errors(self):
        decomp = laguerre_levels(2, 2)
        with pytest.raises(ShapeError):
            project(SpectralState(np.ones(3)), decomp, 0)
        with pytest.raises(ShapeError):
            project(SpectralState(np.ones(decomp.size)), decomp, 99)


class TestSerialization:
    @pytest.mark.parametrize(
        "decomp",
        [
            laguerre_levels(2, 3),
            jacobi_levels(2, [0.5, 0.0], [0.25, 1.0], 3),
        ],
        ids=["laguerre", "jacobi"],
    )
    def test_json_round_trip(self, decomp):
        data = decomp.to_json()
        assert set(data) == {"kind", "d", "alpha", "beta", "levels"}
        back = ChaosDecomposition.from_json(data)
        assert back == decomp

    def test_members_are_int_lists(self):
        data = laguerre_levels(2, 1).to_json()
        assert data["levels"][1]["members"] == [[0, 1], [1, 0]]
        assert data["alpha"] is None and data["beta"] is None
