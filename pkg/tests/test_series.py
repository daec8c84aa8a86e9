"""Arithmetic of truncated counting series."""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from species.errors import (
    IllFoundedEquation,
    NonIntegerCount,
    NonzeroConstantTerm,
    OrderExceeded,
    ZeroConstantDivisor,
)
from species.series import CountSeries, solve_system

from oracles import binomial_convolution, partitional_composite


def counts_series(order, lo=-9, hi=9, zero_constant=False):
    base = st.lists(
        st.integers(lo, hi), min_size=order + 1, max_size=order + 1
    )
    if zero_constant:
        base = base.map(lambda c: [0] + c[1:])
    return base.map(CountSeries.from_counts)


class TestConstruction:
    def test_counts_round_trip(self):
        s = CountSeries.from_counts([1, 1, 2, 6])
        assert s.order == 3
        assert s.counts() == [1, 1, 2, 6]
        assert s.coefficients() == [
            Fraction(1), Fraction(1), Fraction(1), Fraction(1),
        ]

    def test_basis_series(self):
        assert CountSeries.zero(2).counts() == [0, 0, 0]
        assert CountSeries.one(2).counts() == [1, 0, 0]
        assert CountSeries.x(2).counts() == [0, 1, 0]

    def test_coefficient_out_of_range(self):
        with pytest.raises(OrderExceeded):
            CountSeries.one(2).coefficient(3)

    def test_non_integer_count(self):
        s = CountSeries.from_coefficients([Fraction(1, 2)])
        assert s.coefficient(0) == Fraction(1, 2)
        with pytest.raises(NonIntegerCount):
            s.count(0)

    def test_truncate(self):
        s = CountSeries.from_counts([1, 2, 3, 4])
        assert s.truncate(1).counts() == [1, 2]
        with pytest.raises(OrderExceeded):
            s.truncate(9)


class TestArithmetic:
    @given(counts_series(5), counts_series(5))
    def test_add_commutes(self, f, g):
        assert (f + g).counts() == (g + f).counts()

    @given(counts_series(4), counts_series(4), counts_series(4))
    def test_mul_associates(self, f, g, h):
        assert ((f * g) * h).counts() == (f * (g * h)).counts()

    @given(counts_series(5), counts_series(5))
    def test_product_is_binomial_convolution(self, f, g):
        fc, gc = f.counts(), g.counts()
        got = (f * g).counts()
        assert got == [
            binomial_convolution(fc, gc, n) for n in range(6)
        ]

    @given(counts_series(3), counts_series(5))
    def test_product_truncates_to_shorter_factor(self, f, g):
        assert (f * g).order == 3

    def test_scalar_multiplication(self):
        s = CountSeries.from_counts([1, 1, 2])
        assert (3 * s).counts() == [3, 3, 6]
        assert (s * Fraction(1, 2)).coefficient(2) == Fraction(1, 2)

    def test_subtraction(self):
        f = CountSeries.from_counts([3, 1, 4])
        g = CountSeries.from_counts([1, 1, 1])
        assert (f - g).counts() == [2, 0, 3]

    def test_division_inverts_multiplication(self):
        f = CountSeries.from_counts([1, 1, 2, 6, 24])
        g = CountSeries.from_counts([1, 3, 5, 7, 11])
        assert ((f * g) / g).counts() == f.counts()

    def test_division_by_zero_constant(self):
        f = CountSeries.one(3)
        g = CountSeries.x(3)
        with pytest.raises(ZeroConstantDivisor):
            f / g


class TestComposition:
    @settings(max_examples=40)
    @given(counts_series(5, -5, 5), counts_series(5, -5, 5, zero_constant=True))
    def test_composition_is_the_partitional_sum(self, f, g):
        fc, gc = f.counts(), g.counts()
        got = f(g).counts()
        assert got == [
            partitional_composite(fc, gc, n) for n in range(6)
        ]

    def test_inner_constant_must_vanish(self):
        with pytest.raises(NonzeroConstantTerm):
            CountSeries.one(3)(CountSeries.one(3))

    def test_exponential_of_x(self):
        # E(X) composed at series level: counts all equal one
        e = CountSeries.from_coefficients(
            [Fraction(1, factorial(n)) for n in range(7)]
        )
        assert e(CountSeries.x(6)).counts() == e.counts()


class TestCalculus:
    def test_derive_shifts_counts(self):
        # d/dx of the all-permutations series
        s = CountSeries.from_counts([factorial(n) for n in range(6)])
        assert s.derive().counts() == [factorial(n + 1) for n in range(5)]

    def test_derive_at_order_zero(self):
        with pytest.raises(OrderExceeded):
            CountSeries.one(0).derive()

    @given(counts_series(5))
    def test_pointing_is_x_times_derivative(self, f):
        lhs = f.point().truncate(4)
        rhs = CountSeries.x(4) * f.derive()
        assert lhs.counts() == rhs.counts()

    @given(counts_series(5))
    def test_pointing_keeps_order(self, f):
        assert f.point().order == 5


class TestSolve:
    @staticmethod
    def binary_tree_rhs(approx, order):
        b = approx["B"]
        return CountSeries.one(order) + CountSeries.x(order) * b * b

    def test_binary_trees(self):
        solution = solve_system([("B", self.binary_tree_rhs)], order=5)
        assert solution["B"].counts() == [1, 1, 4, 30, 336, 5040]

    def test_solution_is_stable_under_extension(self):
        short = solve_system([("B", self.binary_tree_rhs)], order=4)
        long = solve_system([("B", self.binary_tree_rhs)], order=9)
        assert long["B"].truncate(4).counts() == short["B"].counts()

    def test_resubstituting_the_solution_changes_nothing(self):
        solution = solve_system([("B", self.binary_tree_rhs)], order=6)
        again = self.binary_tree_rhs(solution, 6)
        assert again.counts() == solution["B"].counts()

    def test_mutual_recursion(self):
        # U = 1 + X*V and V = X*U: U counts lists of even length
        def u_rhs(approx, order):
            return CountSeries.one(order) + CountSeries.x(order) * approx["V"]

        def v_rhs(approx, order):
            return CountSeries.x(order) * approx["U"]

        solution = solve_system([("U", u_rhs), ("V", v_rhs)], order=6)
        assert solution["U"].counts() == [
            factorial(n) if n % 2 == 0 else 0 for n in range(7)
        ]

    def test_self_identity_is_rejected(self):
        with pytest.raises(IllFoundedEquation):
            solve_system([("F", lambda approx, order: approx["F"])], order=4)

    def test_divergent_equation_is_rejected(self):
        # F = 1 + F has no fixed point at all
        def rhs(approx, order):
            return CountSeries.one(order) + approx["F"]

        with pytest.raises(IllFoundedEquation):
            solve_system([("F", rhs)], order=4)

    def test_agrees_through(self):
        f = CountSeries.from_counts([1, 2, 3, 4])
        g = CountSeries.from_counts([1, 2, 3, 9])
        assert f.agrees_through(g, 2)
        assert not f.agrees_through(g, 3)
