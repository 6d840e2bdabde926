import math
import random

import pytest
from hypothesis import given, strategies as st

from kakeya.bounds import (
    BoundError,
    alpha_root,
    beta_from_delta,
    bound_table,
    combine_product,
    delta_of,
    minkowski_bound,
    minkowski_bound_alpha,
    telescoping_coefficients,
    telescoping_coefficients_expanded,
)

betas = st.floats(min_value=1.0, max_value=2.0, exclude_min=True)


class TestDelta:
    def test_two(self):
        assert delta_of(2).delta == 2

    @pytest.mark.parametrize("d", [1, 2, 5, 9])
    def test_d_plus_one(self, d):
        assert delta_of(d + 1, d).delta == pytest.approx(d + 1, rel=1e-14)

    def test_pole(self):
        with pytest.raises(BoundError):
            delta_of(3, 3)
        assert delta_of(3 + 1e-9, 3).delta > 1e8

    @given(st.integers(1, 8), st.floats(1.0001, 20))
    def test_round_trip(self, d, s):
        beta = d * s
        assert beta_from_delta(delta_of(beta, d).delta, d) == pytest.approx(beta, rel=1e-9)


class TestCombine:
    def test_two_cubed(self):
        assert combine_product([2, 2, 2]) == pytest.approx(24 / 7, abs=1e-12)

    @pytest.mark.parametrize("d", range(1, 9))
    def test_cube_formula(self, d):
        assert combine_product([2] * d) == pytest.approx(d * 2**d / (2**d - 1), abs=1e-12)

    @given(betas)
    def test_single_factor(self, b):
        assert combine_product([b]) == pytest.approx(b, rel=1e-12)

    def test_alpha_pair(self):
        a = alpha_root().value
        q = a / (a - 1)
        assert combine_product([a, a]) == pytest.approx(2 * q * q / (q * q - 1), abs=1e-12)

    @pytest.mark.parametrize("bad", [[1.0], [2.5], []])
    def test_range(self, bad):
        with pytest.raises(BoundError):
            combine_product(bad)


class TestTelescoping:
    @given(st.lists(betas, min_size=1, max_size=6))
    def test_matches_expanded(self, bs):
        a = telescoping_coefficients(bs)
        b = telescoping_coefficients_expanded(bs)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)

    @given(st.lists(betas, min_size=1, max_size=6))
    def test_positive(self, bs):
        assert all(c > 0 for c in telescoping_coefficients(bs))

    def test_equal_betas(self):
        b = 1.5
        c = telescoping_coefficients([b, b, b])
        assert c[0] == pytest.approx(1 / b**2)
        assert c[1] == pytest.approx(1 / (delta_of(b).delta * b**2))

    def test_weighted_sum_is_bound(self):
        # sum_i c_i H(Y_<=i) must equal sum_i w_i H(Y_i | Y_<i) for any chain
        rng = random.Random(4)
        bs = [rng.uniform(1.01, 2) for _ in range(4)]
        h = sorted(rng.uniform(0, 5) for _ in range(5))
        h[0] = 0.0
        lhs = sum(c * h[i + 1] for i, c in enumerate(telescoping_coefficients(bs)))
        w, prefix = [], 1.0
        for b in bs:
            w.append(1 / (prefix * b))
            prefix *= b / (b - 1)
        rhs = sum(w[i] * (h[i + 1] - h[i]) for i in range(4))
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestAlpha:
    def test_residual(self):
        root = alpha_root()
        assert root.residual <= 1e-12
        assert 1.6 < root.value < 1.7

    def test_bracket(self):
        f = lambda a: a**3 - 4 * a + 2
        assert f(1.6) < 0 < f(1.7)


class TestMinkowski:
    def test_substitution(self):
        assert minkowski_bound(3, 1, 2) == 1.5

    @given(st.integers(1, 8))
    def test_beta_equals_d(self, d):
        assert minkowski_bound(10, d, d) == 10

    def test_two_square(self):
        assert minkowski_bound(4, 2, combine_product([2, 2])) == pytest.approx(3.0, abs=1e-12)

    def test_alpha_increasing(self):
        vals = [minkowski_bound_alpha(10, d) for d in range(1, 10)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 10

    @pytest.mark.parametrize("d", range(1, 9))
    def test_formulas_agree(self, d):
        a = alpha_root().value
        beta = combine_product([a] * d)
        assert minkowski_bound_alpha(8, d) == pytest.approx(minkowski_bound(8, d, beta), abs=1e-12)

    @pytest.mark.parametrize("n, d", [(1, 2), (0, 0), (2.0, 1)])
    def test_invalid(self, n, d):
        with pytest.raises(BoundError):
            minkowski_bound(n, d, 2)


class TestTable:
    def test_rows(self):
        rows = bound_table(2, 8)
        assert [r["d"] for r in rows] == list(range(1, 9))
        assert rows[2]["beta_out"] == pytest.approx(24 / 7, abs=1e-12)
        assert rows[1]["beta_out"] == pytest.approx(8 / 3, abs=1e-12)

    def test_d1_flag(self):
        rows = bound_table(1.5, 2)
        assert rows[0]["note"] and not rows[1]["note"]
        assert rows[0]["beta_out"] == pytest.approx(1.5)

    def test_alpha_d1_factor(self):
        a = alpha_root().value
        assert bound_table(a, 1)[0]["mink_factor"] == pytest.approx(1 / a, abs=1e-12)

    def test_matches_combine(self):
        for r in bound_table(1.8, 6):
            assert r["beta_out"] == pytest.approx(combine_product([1.8] * r["d"]), rel=1e-13)
            assert r["mink_factor"] == pytest.approx(r["d"] / r["beta_out"], rel=1e-13)

    def test_beta_range(self):
        with pytest.raises(BoundError):
            bound_table(2.1, 3)
