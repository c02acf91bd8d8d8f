"""Tests for the bracketed scalar root finders."""

import math

import pytest

from clapp_chaos.core.exceptions import BracketError, ConvergenceError
from clapp_chaos.solvers.roots import bisection, newton_bisection


def square_minus_two(x):
    return x * x - 2.0, 2.0 * x


class TestNewtonBisection:
    def test_finds_root(self):
        result = newton_bisection(square_minus_two, 0.0, 2.0)
        assert result.root == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert result.iterations < 20

    def test_bracket_order_does_not_matter(self):
        assert newton_bisection(square_minus_two, 2.0, 0.0).root == pytest.approx(math.sqrt(2.0))

    def test_exact_endpoint_root(self):
        result = newton_bisection(lambda x: (x * x - 4.0, 2.0 * x), 2.0, 3.0)
        assert result.root == 2.0
        assert result.iterations == 0

    def test_flat_derivative_falls_back_to_bisection(self):
        # f' = 0 at the midpoint 0
        result = newton_bisection(lambda x: (x**3 - 1.0, 3.0 * x * x), -2.0, 2.0)
        assert result.root == pytest.approx(1.0, rel=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            newton_bisection(square_minus_two, 2.0, 3.0)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError) as info:
            newton_bisection(square_minus_two, 0.0, 2.0, max_iter=1)
        assert 0.0 <= info.value.best <= 2.0
        assert info.value.iterations == 1


class TestBisection:
    def test_finds_root(self):
        result = bisection(lambda x: math.cos(x) - x, 0.0, 1.0)
        assert result.root == pytest.approx(0.7390851332151607, rel=1e-14)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            bisection(lambda x: x + 5.0, 0.0, 1.0)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError):
            bisection(lambda x: math.cos(x) - x, 0.0, 1.0, max_iter=3)
