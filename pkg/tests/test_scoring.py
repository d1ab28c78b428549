import pytest

from tmemu.scoring import compare_groups, delta, quartiles, summarize


class TestDelta:
    @pytest.mark.parametrize(
        "x,a,expected",
        [(0, 1.0, 0.0), (1, 1.0, 0.5), (4, 0.5, 2 / 3), (9, 1.0, 0.9)],
    )
    def test_exact_values(self, x, a, expected):
        assert delta(x, a) == pytest.approx(expected, abs=1e-15)

    def test_positive_iff_positive_count(self):
        assert delta(0, 1.0) == 0.0
        assert delta(0, 0.25) == 0.0
        for x in (1, 2, 17):
            assert delta(x, 0.01) > 0

    def test_strictly_increasing_in_x(self):
        values = [delta(x, 0.7) for x in range(200)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_strictly_increasing_in_a_for_positive_x(self):
        levels = [0.1, 0.3, 0.5, 0.9, 1.0]
        for x in (1, 5, 40):
            values = [delta(x, a) for a in levels]
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_bounded_below_one(self):
        for x in (0, 1, 10, 10**9):
            assert delta(x, 1.0) < 1.0

    def test_concave_increments(self):
        gaps = [delta(x + 1, 1.0) - delta(x, 1.0) for x in range(500)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_complement_identity(self):
        for x in (0, 1, 13, 999, 10**6):
            assert abs((1 - delta(x, 1.0)) - 1 / (x + 1)) <= 1e-12

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            delta(-1, 1.0)
        with pytest.raises(ValueError):
            delta(1, 0.0)
        with pytest.raises(ValueError):
            delta(1, 1.5)


class TestQuartiles:
    def test_even_count(self):
        assert quartiles([1, 2, 3, 4]) == (1.0, 1.5, 2.5, 3.5, 4.0)

    def test_odd_count_excludes_median_from_halves(self):
        assert quartiles([1, 2, 3, 4, 5]) == (1.0, 1.5, 3.0, 4.5, 5.0)

    def test_single_value(self):
        assert quartiles([7]) == (7.0, 7.0, 7.0, 7.0, 7.0)

    def test_unsorted_input(self):
        assert quartiles([4, 1, 3, 2]) == quartiles([1, 2, 3, 4])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            quartiles([])

    def test_ordering_invariant(self):
        mn, q1, med, q3, mx = quartiles([3, 1, 4, 1, 5, 9, 2, 6])
        assert mn <= q1 <= med <= q3 <= mx


class TestCompareGroups:
    def test_strict_dominance(self):
        cmp = compare_groups([5, 5, 5], [0, 0, 1])
        assert cmp.verdict is True

    def test_identical_groups_no_strict_ordering(self):
        cmp = compare_groups([2, 3, 4], [2, 3, 4])
        assert cmp.verdict is False

    def test_mean_within_bounds_and_summary_shape(self):
        s = summarize("g", [1, 9, 5, 5])
        assert s.minimum <= s.q1 <= s.median <= s.q3 <= s.maximum
        assert s.minimum <= s.mean <= s.maximum

    def test_verdict_needs_both_mean_and_median(self):
        # equal medians, larger mean: no verdict
        cmp = compare_groups([1, 2, 30], [1, 2, 3])
        assert cmp.first.median == cmp.second.median
        assert cmp.first.mean > cmp.second.mean
        assert cmp.verdict is False

    def test_scale_invariance_of_verdict(self):
        a, b = [3, 7, 1], [2, 2, 0]
        for factor in (1, 2, 17):
            cmp = compare_groups([x * factor for x in a], [x * factor for x in b])
            assert cmp.verdict is True

    def test_delta_of_means_reported(self):
        cmp = compare_groups([1, 1, 1], [0, 0, 0], a=1.0)
        assert cmp.delta_first == 0.5
        assert cmp.delta_second == 0.0

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            compare_groups([], [1])
        with pytest.raises(ValueError):
            compare_groups([1], [])
