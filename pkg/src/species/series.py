"""Exact truncated exponential generating series.

A CountSeries holds ordinary coefficients a_0 .. a_N as exact rationals; the
structure count at n is n! * a_n.  All arithmetic (sum, Cauchy product,
substitution, derivative, pointing, division) is exact, so extending the
truncation order never changes a coefficient that was already computed.

Counts may be negative or fractional at this level: the engine works in the
full rational-coefficient algebra (a quotient like exp(-x)/(1-x) passes
through negative intermediate values).  Only count() insists on integrality,
and only the CLI insists on nonnegativity.
"""

from fractions import Fraction
from math import factorial

from .errors import (
    IllFoundedEquation,
    NonIntegerCount,
    NonzeroConstantTerm,
    OrderExceeded,
    ZeroConstantDivisor,
)

__all__ = [
    "CountSeries",
    "add",
    "multiply",
    "compose",
    "derive",
    "point",
    "divide",
    "solve_system",
]

_ZERO = Fraction(0)


def _cauchy(a, b, order):
    """Coefficient lists of the product of a and b, truncated at order."""
    out = []
    for n in range(order + 1):
        acc = _ZERO
        for j in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc += a[j] * b[n - j]
        out.append(acc)
    return out


class CountSeries:
    """Truncated series sum_{n<=N} a_n x^n with exact rational a_n."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients):
        coeffs = tuple(Fraction(c) for c in coefficients)
        if not coeffs:
            raise ValueError("a series needs at least its constant coefficient")
        self._coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coefficients):
        return cls(coefficients)

    @classmethod
    def from_counts(cls, counts):
        """Build a series from structure counts f_n, i.e. a_n = f_n / n!."""
        return cls(Fraction(f) / factorial(n) for n, f in enumerate(counts))

    @classmethod
    def zero(cls, order):
        return cls([_ZERO] * (order + 1))

    @classmethod
    def one(cls, order):
        return cls([Fraction(1)] + [_ZERO] * order)

    @classmethod
    def x(cls, order):
        if order < 1:
            raise OrderExceeded("the series x needs truncation order >= 1")
        return cls([_ZERO, Fraction(1)] + [_ZERO] * (order - 1))

    # -- observers ---------------------------------------------------------

    @property
    def order(self):
        return len(self._coeffs) - 1

    def coefficient(self, n):
        """The ordinary coefficient a_n."""
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        if n > self.order:
            raise OrderExceeded(
                f"coefficient {n} requested beyond truncation order {self.order}"
            )
        return self._coeffs[n]

    def count(self, n):
        """The labeled structure count n! * a_n, which must be an integer."""
        value = self.coefficient(n) * factorial(n)
        if value.denominator != 1:
            raise NonIntegerCount(
                f"count at n={n} is {value}, not an integer; "
                "this is not the counting series of a species"
            )
        return int(value)

    def counts(self):
        """All counts f_0 .. f_N as a list of integers."""
        return [self.count(n) for n in range(self.order + 1)]

    def coefficients(self):
        return list(self._coeffs)

    def truncate(self, order):
        if order > self.order:
            raise OrderExceeded(
                f"cannot truncate an order-{self.order} series to order {order}"
            )
        return CountSeries(self._coeffs[: order + 1])

    def agrees_through(self, other, order):
        """True when self and other share coefficients a_0 .. a_order."""
        return (
            self._coeffs[: order + 1] == other._coeffs[: order + 1]
            and self.order >= order
            and other.order >= order
        )

    # -- arithmetic --------------------------------------------------------

    def _promoted(self, other):
        """Lift a plain number to a constant series of the same order."""
        if isinstance(other, CountSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return CountSeries(
                [Fraction(other)] + [_ZERO] * self.order
            )
        return None

    def __add__(self, other):
        other = self._promoted(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        return CountSeries(
            self._coeffs[n] + other._coeffs[n] for n in range(order + 1)
        )

    __radd__ = __add__

    def __neg__(self):
        return CountSeries(-c for c in self._coeffs)

    def __sub__(self, other):
        other = self._promoted(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._promoted(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CountSeries(c * other for c in self._coeffs)
        if not isinstance(other, CountSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return CountSeries(_cauchy(self._coeffs, other._coeffs, order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CountSeries(c / Fraction(other) for c in self._coeffs)
        if not isinstance(other, CountSeries):
            return NotImplemented
        if other._coeffs[0] == 0:
            raise ZeroConstantDivisor(
                "division requires a divisor with nonzero constant term"
            )
        order = min(self.order, other.order)
        quot = []
        for n in range(order + 1):
            acc = self._coeffs[n]
            for i in range(n):
                acc -= quot[i] * other._coeffs[n - i]
            quot.append(acc / other._coeffs[0])
        return CountSeries(quot)

    def __call__(self, inner):
        """Substitution self(inner); inner must have zero constant term."""
        if not isinstance(inner, CountSeries):
            raise TypeError("substitution needs a CountSeries argument")
        if inner._coeffs[0] != 0:
            raise NonzeroConstantTerm(
                "substitution requires an inner series with zero constant term"
            )
        order = min(self.order, inner.order)
        f = self._coeffs
        g = inner._coeffs
        # Horner: f_N, then g*acc + f_k for k = N-1 .. 0, truncated throughout.
        acc = [f[order]] + [_ZERO] * order
        for k in range(order - 1, -1, -1):
            acc = _cauchy(g, acc, order)
            acc[0] += f[k]
        return CountSeries(acc)

    def derive(self):
        """The derivative: b_n = (n+1) a_{n+1}; order drops by one."""
        if self.order < 1:
            raise OrderExceeded("cannot differentiate an order-0 series")
        return CountSeries(
            (n + 1) * self._coeffs[n + 1] for n in range(self.order)
        )

    def point(self):
        """Pointing: b_n = n a_n, i.e. x * d/dx, at the same order."""
        return CountSeries(n * c for n, c in enumerate(self._coeffs))

    # -- plumbing ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, CountSeries) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self._coeffs[:8])
        if self.order > 7:
            shown += ", ..."
        return f"CountSeries(order={self.order}, [{shown}])"


# -- functional aliases ----------------------------------------------------

def coefficient(f, n):
    return f.coefficient(n)


def count(f, n):
    return f.count(n)


def add(f, g):
    return f + g


def multiply(f, g):
    return f * g


def compose(f, g):
    return f(g)


def derive(f):
    return f.derive()


def point(f):
    return f.point()


def divide(f, g):
    return f / g


# -- implicit systems ------------------------------------------------------

def _probe(order):
    """A generic start with zero constant term: x + x^2 + ... + x^order."""
    return CountSeries([_ZERO] + [Fraction(1)] * order)


def solve_system(equations, order, order_loss=0):
    """Solve a system of implicit equations name = rhs(names) for series.

    equations is a sequence of (name, rhs) pairs where rhs is a callable
    rhs(approx, target_order) -> CountSeries evaluating the right-hand side
    against the current approximations.  order_loss is the number of
    truncation orders one evaluation may consume (nonzero only when a
    derivative is applied to an unknown inside its own cycle).

    The iteration starts from the zero series and, independently, from a
    generic nonzero series.  A well-founded system is a contraction in the
    coefficient metric, so both runs stabilize on the same coefficients; if
    either run fails to stabilize, or the two runs disagree, the system does
    not determine its unknowns and IllFoundedEquation is raised.
    """
    names = [name for name, _ in equations]
    if len(set(names)) != len(names):
        raise ValueError("duplicate name in equation system")
    if not equations:
        return {}

    cap = (order + 2) * len(equations)
    deep = order + cap * order_loss

    def run(start):
        approx = {name: start for name in names}
        for passno in range(1, cap + 1):
            target = deep - passno * order_loss
            current = dict(approx)
            for name, rhs in equations:
                # Gauss-Seidel when no order is lost per pass: later
                # equations see this pass's values, which speeds up chains.
                # With order loss, stick to the previous snapshot so every
                # lookup still has enough truncation headroom.
                source = current if order_loss == 0 else approx
                current[name] = rhs(dict(source), target)
            if all(
                current[name].agrees_through(approx[name], order)
                for name in names
            ):
                return {name: current[name].truncate(order) for name in names}
            approx = current
        raise IllFoundedEquation(
            "system {"
            + ", ".join(names)
            + f"}} did not stabilize through order {order} after {cap} passes"
        )

    solution = run(CountSeries.zero(deep))
    cross_check = run(_probe(deep))
    for name in names:
        if not solution[name].agrees_through(cross_check[name], order):
            raise IllFoundedEquation(
                f"equation for {name} admits more than one fixed point; "
                "the system does not determine it"
            )
    return solution
