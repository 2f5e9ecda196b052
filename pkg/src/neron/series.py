"""Truncated power series in ``k[[x]]`` known modulo ``x^N``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Tuple

from .polycore import Polynomial, PolyRing


class PrecisionError(ArithmeticError):
    """A comparison needs more precision than the series carries."""


class NonUnitError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class AtLeast:
    """An order known only to be ``>= bound`` (all stored coefficients vanish).

    Comparisons against integers are answered when the bound decides them and
    raise :class:`PrecisionError` otherwise.
    """

    bound: int

    def _undecided(self, k):
        return PrecisionError(f"order >= {self.bound} cannot be compared with {k}")

    def _check(self, k):
        if isinstance(k, AtLeast):
            raise PrecisionError("cannot compare two truncated orders")

    def __lt__(self, k):
        self._check(k)
        if k <= self.bound:
            return False
        raise self._undecided(k)

    def __le__(self, k):
        self._check(k)
        if k < self.bound:
            return False
        raise self._undecided(k)

    def __gt__(self, k):
        self._check(k)
        if k < self.bound:
            return True
        raise self._undecided(k)

    def __ge__(self, k):
        self._check(k)
        if k <= self.bound:
            return True
        raise self._undecided(k)

    def __eq__(self, k):
        if isinstance(k, AtLeast):
            return self.bound == k.bound
        if isinstance(k, (int, float)):
            if k < self.bound:
                return False
            raise self._undecided(k)
        return NotImplemented

    def __hash__(self):
        return hash(("AtLeast", self.bound))

    def __str__(self):
        return f">={self.bound}"


def valuation(p: Polynomial, precision: int, x: str = "x"):
    """x-order of a polynomial in ``x`` read modulo ``x^precision``."""
    o = p.x_order(x)
    return AtLeast(precision) if o >= precision else int(o)


@dataclass(frozen=True)
class TruncatedSeries:
    """Series ``sum c_i x^i`` known modulo ``x^precision``.

    ``coeffs`` always has length ``precision``; trailing zeros are kept.
    """

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("precision must be positive")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, precision: int) -> "TruncatedSeries":
        c = [Fraction(a) for a in coeffs[:precision]]
        c += [Fraction(0)] * (precision - len(c))
        return cls(tuple(c))

    @classmethod
    def constant(cls, c, precision: int) -> "TruncatedSeries":
        return cls.from_coeffs([c], precision)

    @classmethod
    def x_power(cls, k: int, precision: int) -> "TruncatedSeries":
        return cls.from_coeffs([0] * k + [1], precision)

    @classmethod
    def from_polynomial(cls, p: Polynomial, precision: int, x: str = "x") -> "TruncatedSeries":
        if any(v != x for v in p.variables()):
            raise ValueError(f"{p} is not a polynomial in {x} alone")
        c = [Fraction(0)] * precision
        i = p.ring.index.get(x)
        for e, a in p.terms.items():
            k = e[i] if i is not None else 0
            if k < precision:
                c[k] += a
        return cls(tuple(c))

    def to_polynomial(self, ring: PolyRing, x: str = "x") -> Polynomial:
        return Polynomial.from_dict(
            ring, {_x_exp(ring, x, i): a for i, a in enumerate(self.coeffs) if a})

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise PrecisionError("cannot raise precision")
        return TruncatedSeries(self.coeffs[:precision])

    def _match(self, other) -> Tuple["TruncatedSeries", "TruncatedSeries"]:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.precision)
        n = min(self.precision, other.precision)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other):
        a, b = self._match(other)
        return TruncatedSeries(tuple(p + q for p, q in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-p for p in self.coeffs))

    def __sub__(self, other):
        a, b = self._match(other)
        return TruncatedSeries(tuple(p - q for p, q in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(tuple(p * other for p in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return series_mul(self, series_inverse(other))

    def __pow__(self, k: int):
        result = TruncatedSeries.constant(1, self.precision)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``x^k`` keeping the precision (``k >= 0``)."""
        return TruncatedSeries.from_coeffs([0] * k + list(self.coeffs), self.precision)

    def divide_by_x_power(self, k: int) -> "TruncatedSeries":
        """Exact division by ``x^k``, losing ``k`` coefficients of precision."""
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"series not divisible by x^{k}")
        if k >= self.precision:
            raise PrecisionError("no coefficients left after division")
        return TruncatedSeries(self.coeffs[k:])

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def __str__(self):
        terms = [f"{a}*x^{i}" for i, a in enumerate(self.coeffs) if a]
        return (" + ".join(terms) or "0") + f" + O(x^{self.precision})"


def _x_exp(ring: PolyRing, x: str, k: int):
    e = [0] * ring.nvars
    e[ring.index[x]] = k
    return tuple(e)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.precision, b.precision)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(n):
        s = Fraction(0)
        for i in range(k + 1):
            if ac[i] and bc[k - i]:
                s += ac[i] * bc[k - i]
        out.append(s)
    return TruncatedSeries(tuple(out))


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    """``b`` with ``a*b = 1 mod x^N`` by Newton iteration ``b <- b(2 - ab)``."""
    if not a.is_unit():
        raise NonUnitError("series with zero constant term is not invertible")
    n = a.precision
    b = TruncatedSeries((1 / a.coeffs[0],))
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        ap = a.truncate(prec)
        bp = TruncatedSeries.from_coeffs(list(b.coeffs), prec)
        b = bp * (2 - ap * bp)
    return b


def series_sqrt(a: TruncatedSeries) -> TruncatedSeries:
    """Square root with constant term 1, by Newton ``b <- (b + a/b)/2``."""
    if a.coeffs[0] != 1:
        raise ValueError("series_sqrt needs constant term 1")
    n = a.precision
    b = TruncatedSeries((Fraction(1),))
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        ap = a.truncate(prec)
        bp = TruncatedSeries.from_coeffs(list(b.coeffs), prec)
        b = (bp + ap * series_inverse(bp)) * Fraction(1, 2)
    return b


def series_order(a: TruncatedSeries):
    for i, c in enumerate(a.coeffs):
        if c:
            return i
    return AtLeast(a.precision)


def EXP(precision: int) -> TruncatedSeries:
    return TruncatedSeries(tuple(Fraction(1, factorial(i)) for i in range(precision)))


def FACT(precision: int) -> TruncatedSeries:
    return TruncatedSeries(tuple(Fraction(factorial(i)) for i in range(precision)))


def evaluate_on_series(p: Polynomial, values: dict, precision: int,
                       x: str = "x") -> TruncatedSeries:
    """Evaluate ``p`` with variables in ``values`` replaced by series; ``x``
    stays the series variable.  Unassigned variables other than ``x`` raise."""
    names = p.ring.names
    xi = p.ring.index.get(x)
    cache = {}

    def power(i, k):
        if (i, k) not in cache:
            s = values[names[i]]
            cache[(i, k)] = s.truncate(precision) ** k if k > 1 else s.truncate(precision)
        return cache[(i, k)]

    total = TruncatedSeries.constant(0, precision)
    for e, c in p.terms.items():
        xk = e[xi] if xi is not None else 0
        if xk >= precision:
            continue
        term = None
        for i, k in enumerate(e):
            if k and i != xi:
                if names[i] not in values:
                    raise KeyError(f"no series for {names[i]!r}")
                s = power(i, k)
                term = s if term is None else term * s
        if term is None:
            term = TruncatedSeries.constant(1, precision)
        total = total + (term.shift(xk) * c)
    return total
