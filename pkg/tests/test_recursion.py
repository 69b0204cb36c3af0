"""Tests for the counting recursion, Cover's closed form, and crossings."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vclab.errors import NoCrossingError, OutOfGridError, ValidationError
from vclab.numerics import NEG_INF
from vclab.recursion import (
    CountTable,
    build_count_table,
    cover_count_exact,
    crossing_load,
    vc_entropy,
)
from vclab.structure import StructureSpec, ThetaCoefficients, psi2, theta_coefficients

COVER = ThetaCoefficients(k=1, theta=(1.0, 1.0))
ORTHOGONAL_PAIRS = ThetaCoefficients(k=2, theta=(0.5, 1.0, 0.5))


class TestCoverExact:
    def test_one_dimensional(self):
        assert cover_count_exact(1, 3) == 2

    def test_full_expressivity(self):
        assert cover_count_exact(5, 5) == 32
        for n in range(1, 8):
            for p in range(1, n + 1):
                assert cover_count_exact(n, p) == 2**p

    def test_half_fraction_at_double_load(self):
        # C(n, 2n) = 2^(2n-1): exactly half of all labelings realizable
        for n in range(1, 13):
            assert cover_count_exact(n, 2 * n) == 2 ** (2 * n - 1)

    def test_example_n5_p10(self):
        assert cover_count_exact(5, 10) == 512

    def test_validation(self):
        with pytest.raises(ValidationError):
            cover_count_exact(0, 3)


class TestBuildTable:
    def test_cover_equivalence(self):
        table = build_count_table(COVER, n_max=60, p_max=60)
        for n in range(1, 61):
            for p in range(1, 61):
                exact = math.log(cover_count_exact(n, p))
                assert table.log_count(n, p) == pytest.approx(exact, rel=1e-10)

    def test_hand_iterated_values(self):
        table = build_count_table(ORTHOGONAL_PAIRS, n_max=4, p_max=4)
        assert math.exp(table.log_count(1, 2)) == pytest.approx(1.0, rel=1e-12)
        assert math.exp(table.log_count(2, 2)) == pytest.approx(3.0, rel=1e-12)

    def test_degenerate_pair_is_cover(self):
        degenerate = ThetaCoefficients(k=2, theta=(1.0, 1.0, 0.0))
        t2 = build_count_table(degenerate, n_max=20, p_max=30)
        t1 = build_count_table(COVER, n_max=20, p_max=30)
        np.testing.assert_allclose(
            t2.log_counts[1:, 1:], t1.log_counts[1:, 1:], rtol=1e-12
        )
        assert math.exp(t2.log_count(2, 2)) == pytest.approx(4.0)

    def test_boundary_column(self):
        table = build_count_table(ORTHOGONAL_PAIRS, n_max=10, p_max=5)
        for n in range(1, 11):
            assert table.log_count(n, 1) == pytest.approx(math.log(2.0))
        assert np.all(table.log_counts[0, :] == NEG_INF)

    def test_monotone_in_n(self):
        table = build_count_table(ORTHOGONAL_PAIRS, n_max=30, p_max=40)
        block = table.log_counts[1:, 1:]
        assert np.all(np.diff(block, axis=0) >= -1e-12)

    @given(st.floats(min_value=0.05, max_value=1.0), st.integers(0, 1000))
    @settings(max_examples=40, deadline=None)
    def test_bounded_by_full_expressivity(self, theta0, seed):
        theta = ThetaCoefficients(k=2, theta=(theta0, 1.0, 1.0 - theta0))
        table = build_count_table(theta, n_max=12, p_max=25)
        for n in range(1, 13):
            for p in range(1, 26):
                assert table.log_count(n, p) <= p * math.log(2.0) + 1e-9

    def test_full_expressivity_fixed_point(self):
        # n >> kp: every labeling realizable, the count sticks at 2^p; this
        # pins theta_2 = 1 - psi_2 through the sum rule
        for rho in (0.0, 0.4, 0.9):
            theta = theta_coefficients(StructureSpec.pairs(rho))
            table = build_count_table(theta, n_max=60, p_max=12)
            for p in range(1, 13):
                assert table.log_count(60, p) == pytest.approx(
                    p * math.log(2.0), rel=1e-12
                )

    def test_large_grid_accuracy(self):
        # deep-grid accumulation stays at working precision: the k=1 lane of
        # a padded theta must match Cover exactly far into the grid
        table = build_count_table(COVER, n_max=400, p_max=4000)
        for n, p in ((400, 4000), (123, 3999), (17, 2048)):
            exact = math.log(cover_count_exact(n, p))
            assert table.log_count(n, p) == pytest.approx(exact, rel=1e-9)


class TestEntropyAccess:
    def test_vc_entropy_boundary(self):
        table = build_count_table(ORTHOGONAL_PAIRS, n_max=5, p_max=5)
        assert vc_entropy(table, 3, 1) == pytest.approx(math.log(2.0))

    def test_out_of_grid(self):
        table = build_count_table(COVER, n_max=5, p_max=5)
        with pytest.raises(OutOfGridError):
            vc_entropy(table, 6, 1)
        with pytest.raises(OutOfGridError):
            table.log_count_at_load(5, 2.0)

    def test_load_interpolation_matches_columns(self):
        table = build_count_table(ORTHOGONAL_PAIRS, n_max=10, p_max=30)
        assert table.log_count_at_load(10, 2.0) == table.log_count(10, 20)
        mid = table.log_count_at_load(10, 2.05)
        lo, hi = table.log_count(10, 20), table.log_count(10, 21)
        assert min(lo, hi) <= mid <= max(lo, hi)

    def test_nonmonotonic_in_p_for_pairs(self):
        theta = theta_coefficients(StructureSpec.pairs(0.5))
        table = build_count_table(theta, n_max=5, p_max=120)
        h = np.array([table.log_count(5, p) for p in range(1, 121)])
        peak = int(np.argmax(h))
        assert 0 < peak < len(h) - 1
        assert h[peak] > h[0]
        assert h[-1] < h[0]


class TestExports:
    def test_csv_layout(self, tmp_path):
        table = build_count_table(COVER, n_max=2, p_max=2)
        path = tmp_path / "table.csv"
        table.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "n,p,alpha,log_count"
        assert len(lines) == 1 + 4
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "1"
        assert float(first[3]) == pytest.approx(math.log(2.0))

    def test_summary_checksum_stable(self):
        a = build_count_table(COVER, n_max=4, p_max=4).summary()
        b = build_count_table(COVER, n_max=4, p_max=4).summary()
        assert a == b
        assert a["theta"] == [1.0, 1.0]
        c = build_count_table(ORTHOGONAL_PAIRS, n_max=4, p_max=4).summary()
        assert c["checksum"] != a["checksum"]


class TestCrossing:
    def test_orthogonal_pairs_crossing_near_transition(self):
        # the finite-n entropy curves cross within a few percent of the
        # asymptotic critical load 4.8639 (independently hand-bracketed)
        alpha = crossing_load(ORTHOGONAL_PAIRS, 20, 40, (2.0, 8.0))
        assert abs(alpha - 4.8639) / 4.8639 < 0.10

    def test_symmetric_in_dimension_order(self):
        a = crossing_load(ORTHOGONAL_PAIRS, 20, 40, (2.0, 8.0))
        b = crossing_load(ORTHOGONAL_PAIRS, 40, 20, (2.0, 8.0))
        assert a == pytest.approx(b, abs=2e-4)

    def test_cover_never_crosses(self):
        with pytest.raises(NoCrossingError):
            crossing_load(COVER, 10, 20, (0.5, 30.0))

    def test_small_dimensions_displaced(self):
        # (6, 3) crossing sits further from the asymptotic value than (40, 20)
        star = 4.863876182928192
        small = crossing_load(ORTHOGONAL_PAIRS, 6, 3, (2.0, 8.0))
        large = crossing_load(ORTHOGONAL_PAIRS, 40, 20, (2.0, 8.0))
        assert abs(small - star) > abs(large - star)

    def test_same_dimension_rejected(self):
        with pytest.raises(ValidationError):
            crossing_load(COVER, 5, 5, (1.0, 2.0))
