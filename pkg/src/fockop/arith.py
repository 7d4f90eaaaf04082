"""Exact numeric substrate: multi-indices, factorial ratios, radicals.

Every value here is immutable and every operation is a pure function, so
all of it is safe to share between threads.  Scalars stay exact end to
end: integers, ``fractions.Fraction`` for rationals, Gaussian rationals
for complex coefficients, and radical coefficients of the shape
``(Gaussian rational) * sqrt(square-free integer)`` which are closed
under every coefficient computation the operator engine performs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import DimensionMismatchError, RadicandMismatchError

RationalLike = Union[int, Fraction]


# ---------------------------------------------------------------------------
# multi-indices


class MultiIndex(tuple):
    """A tuple of nonnegative integers indexing monomials and basis vectors."""

    __slots__ = ()

    def __new__(cls, components: Iterable[int]) -> "MultiIndex":
        items = tuple(int(c) for c in components)
        if not items:
            raise ValueError("a multi-index needs at least one component")
        for c in items:
            if c < 0:
                raise ValueError(f"multi-index components must be >= 0, got {items}")
        return tuple.__new__(cls, items)

    @staticmethod
    def _wrap(items: tuple) -> "MultiIndex":
        """Wrap an already-validated tuple of nonnegative ints (internal)."""
        return tuple.__new__(MultiIndex, items)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        """Sum of the components."""
        return sum(self)

    def __add__(self, other) -> "MultiIndex":  # type: ignore[override]
        _check_same_dimension(self, other)
        return tuple.__new__(MultiIndex, tuple(a + b for a, b in zip(self, other)))

    def __radd__(self, other):  # pragma: no cover - symmetry only
        return self.__add__(other)

    def scaled_add(self, t: int, direction: "MultiIndex") -> "MultiIndex":
        """Return ``self + t * direction``."""
        _check_same_dimension(self, direction)
        if t < 0:
            raise ValueError("scale must be >= 0")
        return MultiIndex(a + t * d for a, d in zip(self, direction))

    @staticmethod
    def zero(dimension: int) -> "MultiIndex":
        return MultiIndex((0,) * dimension)

    @staticmethod
    def unit(dimension: int, j: int) -> "MultiIndex":
        """Standard basis index e_j (0-based j)."""
        return MultiIndex(1 if k == j else 0 for k in range(dimension))

    @staticmethod
    def ones(dimension: int) -> "MultiIndex":
        return MultiIndex((1,) * dimension)


def _check_same_dimension(a, b) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"multi-index dimensions differ: {len(a)} vs {len(b)}"
        )


@dataclass(frozen=True)
class ComponentwiseOrder:
    """Result of comparing two multi-indices componentwise."""

    ge: bool
    gt: bool
    le: bool
    lt: bool

    @property
    def incomparable(self) -> bool:
        return not (self.ge or self.le)


def multiindex_compare(a: MultiIndex, b: MultiIndex) -> ComponentwiseOrder:
    """Componentwise partial order: a >= b iff every component dominates."""
    _check_same_dimension(a, b)
    return ComponentwiseOrder(
        ge=all(x >= y for x, y in zip(a, b)),
        gt=all(x > y for x, y in zip(a, b)),
        le=all(x <= y for x, y in zip(a, b)),
        lt=all(x < y for x, y in zip(a, b)),
    )


def dominates(a: MultiIndex, b: MultiIndex) -> bool:
    """a >= b componentwise."""
    _check_same_dimension(a, b)
    return all(x >= y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# factorial ratios


def rising_product(start: int, count: int) -> int:
    """(start+1) * (start+2) * ... * (start+count), i.e. (start+count)!/start!."""
    out = 1
    for i in range(start + 1, start + count + 1):
        out *= i
    return out


@dataclass(frozen=True)
class FactorialRatio:
    """A product of factorials divided by a product of factorials.

    Terms are multisets of nonnegative integers; ``(t,)`` denotes ``t!``.
    Evaluation cancels paired numerator/denominator terms into short
    rising products so no full factorial is computed when a shorter
    product suffices.
    """

    numerator_terms: tuple
    denominator_terms: tuple

    def __init__(self, numerator_terms: Iterable[int] = (), denominator_terms: Iterable[int] = ()):
        num = tuple(sorted((int(t) for t in numerator_terms), reverse=True))
        den = tuple(sorted((int(t) for t in denominator_terms), reverse=True))
        for t in num + den:
            if t < 0:
                raise ValueError("factorial arguments must be >= 0")
        object.__setattr__(self, "numerator_terms", num)
        object.__setattr__(self, "denominator_terms", den)

    def __mul__(self, other: "FactorialRatio") -> "FactorialRatio":
        return FactorialRatio(
            self.numerator_terms + other.numerator_terms,
            self.denominator_terms + other.denominator_terms,
        )

    def value(self) -> Fraction:
        num = den = 1
        pairs = min(len(self.numerator_terms), len(self.denominator_terms))
        for a, b in zip(self.numerator_terms, self.denominator_terms):
            if a >= b:
                num *= rising_product(b, a - b)
            else:
                den *= rising_product(a, b - a)
        for t in self.numerator_terms[pairs:]:
            num *= math.factorial(t)
        for t in self.denominator_terms[pairs:]:
            den *= math.factorial(t)
        return Fraction(num, den)

    def cancelled_factors(self) -> "tuple[tuple[int, ...], tuple[int, ...]]":
        """Post-cancellation integer factor lists (numerator, denominator).

        Each factor is a plain integer in ``[2, max_term]``; the product of
        the numerator list over the denominator list equals ``value()``.
        Useful when the ratio feeds a radicand and must stay factored.
        """
        num: list = []
        den: list = []
        pairs = min(len(self.numerator_terms), len(self.denominator_terms))
        for a, b in zip(self.numerator_terms, self.denominator_terms):
            if a >= b:
                num.extend(range(max(b + 1, 2), a + 1))
            else:
                den.extend(range(max(a + 1, 2), b + 1))
        for t in self.numerator_terms[pairs:]:
            num.extend(range(2, t + 1))
        for t in self.denominator_terms[pairs:]:
            den.extend(range(2, t + 1))
        return tuple(num), tuple(den)


def factorial_ratio_eval(ratio: FactorialRatio) -> Fraction:
    """Exact value of a factorial ratio."""
    return ratio.value()


# ---------------------------------------------------------------------------
# square-free bookkeeping


@lru_cache(maxsize=None)
def square_free_split(k: int) -> "tuple[int, int]":
    """Split k >= 1 as root**2 * squarefree; returns (root, squarefree)."""
    if k < 1:
        raise ValueError("square_free_split needs k >= 1")
    root = 1
    sf = 1
    while k % 4 == 0:
        k //= 4
        root *= 2
    if k % 2 == 0:
        k //= 2
        sf *= 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            e = 0
            while k % d == 0:
                k //= d
                e += 1
            root *= d ** (e // 2)
            if e % 2:
                sf *= d
        d += 2
    sf *= k
    return root, sf


def _fold_square_free(factors: Iterable[int]) -> "tuple[int, int]":
    """Accumulate (root, squarefree) over a product of positive integers."""
    root = 1
    sf = 1
    for u in factors:
        r, s = square_free_split(u)
        root *= r
        g = math.gcd(sf, s)
        root *= g
        sf = (sf // g) * (s // g)
    return root, sf


# ---------------------------------------------------------------------------
# Gaussian rationals

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re: RationalLike = 0, im: RationalLike = 0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        if not self.im and not other.im:
            return GaussianRational(self.re + other.re, _F0)
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        if not self.im and not other.im:
            return GaussianRational(self.re - other.re, _F0)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re, _F0)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, c: RationalLike) -> "GaussianRational":
        if not self.im:
            return GaussianRational(self.re * c, _F0)
        return GaussianRational(self.re * c, self.im * c)

    def conjugate(self) -> "GaussianRational":
        if not self.im:
            return self
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return format_gaussian(self)


GAUSSIAN_ZERO = GaussianRational(_F0, _F0)
GAUSSIAN_ONE = GaussianRational(_F1, _F0)


def format_gaussian(c: GaussianRational) -> str:
    """Render like '3', '-2/5', '3*i', '1/2-2*i', '0'."""
    if c.is_zero():
        return "0"
    if not c.im:
        return str(c.re)
    im_mag = "i" if abs(c.im) == 1 else f"{abs(c.im)}*i"
    if not c.re:
        return im_mag if c.im > 0 else f"-{im_mag}"
    sign = "+" if c.im > 0 else "-"
    return f"{c.re}{sign}{im_mag}"


# ---------------------------------------------------------------------------
# radical coefficients


@dataclass(frozen=True)
class RadicalCoefficient:
    """Exact scalar of the form (Gaussian rational) * sqrt(radicand).

    Canonical form: ``radicand`` is a square-free positive integer (1 for
    purely rational values), or 0 exactly when the whole coefficient is
    zero.  Square factors of any constructed radicand are absorbed into
    the rational part, and a fractional radicand p/q is rewritten as
    sqrt(p*q)/q, so each square class of rationals has one representative.
    That makes structural equality coincide with value equality and lets
    same-class contributions merge exactly.
    """

    rational: GaussianRational
    radicand: int

    @staticmethod
    def from_rational(value) -> "RadicalCoefficient":
        if isinstance(value, GaussianRational):
            g = value
        else:
            g = GaussianRational(Fraction(value), _F0)
        if g.is_zero():
            return RADICAL_ZERO
        return RadicalCoefficient(g, 1)

    @staticmethod
    def normalize(rational, radicand) -> "RadicalCoefficient":
        """Canonicalize ``rational * sqrt(radicand)`` for radicand >= 0."""
        if not isinstance(rational, GaussianRational):
            rational = GaussianRational(Fraction(rational), _F0)
        radicand = Fraction(radicand)
        if radicand < 0:
            raise ValueError("radicand must be >= 0")
        if rational.is_zero() or radicand == 0:
            return RADICAL_ZERO
        root_n, sf_n = square_free_split(radicand.numerator)
        root_d, sf_d = square_free_split(radicand.denominator)
        scale = Fraction(root_n, root_d * sf_d)
        return RadicalCoefficient(rational.scale(scale), sf_n * sf_d)

    @staticmethod
    def from_sqrt_ratio(rational: GaussianRational, num_factors, den_factors) -> "RadicalCoefficient":
        """Canonical ``rational * sqrt(prod(num_factors)/prod(den_factors))``.

        The factor lists hold positive integers small enough to factor by
        trial division; they typically come straight from
        ``FactorialRatio.cancelled_factors``.
        """
        if rational.is_zero():
            return RADICAL_ZERO
        root_n, sf_n = _fold_square_free(num_factors)
        root_d, sf_d = _fold_square_free(den_factors)
        g = math.gcd(sf_n, sf_d)
        sf_n //= g
        sf_d //= g
        scale = Fraction(root_n, root_d * sf_d)
        return RadicalCoefficient(rational.scale(scale), sf_n * sf_d)

    def is_zero(self) -> bool:
        return self.radicand == 0

    def __neg__(self) -> "RadicalCoefficient":
        if self.radicand == 0:
            return self
        return RadicalCoefficient(-self.rational, self.radicand)

    def __add__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        if self.radicand == 0:
            return other
        if other.radicand == 0:
            return self
        if self.radicand != other.radicand:
            raise RadicandMismatchError(
                f"cannot add unlike radicands {self.radicand} and {other.radicand}"
            )
        s = self.rational + other.rational
        if s.is_zero():
            return RADICAL_ZERO
        return RadicalCoefficient(s, self.radicand)

    def __sub__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        return self + (-other)

    def __mul__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        if self.radicand == 0 or other.radicand == 0:
            return RADICAL_ZERO
        if self.radicand == 1:
            if not self.rational.im and self.rational.re == 1:
                return other
            return RadicalCoefficient(self.rational * other.rational, other.radicand)
        if other.radicand == 1:
            return RadicalCoefficient(self.rational * other.rational, self.radicand)
        g = math.gcd(self.radicand, other.radicand)
        rational = self.rational * other.rational
        if g != 1:
            rational = rational.scale(g)
        return RadicalCoefficient(
            rational, (self.radicand // g) * (other.radicand // g)
        )

    def scale(self, c) -> "RadicalCoefficient":
        """Multiply by an exact rational or Gaussian-rational scalar."""
        if self.radicand == 0:
            return self
        if isinstance(c, GaussianRational):
            scaled = self.rational * c
        else:
            scaled = self.rational.scale(c)
        if scaled.is_zero():
            return RADICAL_ZERO
        return RadicalCoefficient(scaled, self.radicand)

    def conjugate(self) -> "RadicalCoefficient":
        if self.radicand == 0:
            return self
        return RadicalCoefficient(self.rational.conjugate(), self.radicand)

    def abs_sq(self) -> Fraction:
        """|value|^2 as an exact rational."""
        return self.rational.abs_sq() * self.radicand

    def to_complex(self) -> complex:
        if self.radicand == 0:
            return 0j
        return self.rational.to_complex() * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.radicand == 0:
            return "0"
        if self.radicand == 1:
            return format_gaussian(self.rational)
        return f"({format_gaussian(self.rational)})*sqrt({self.radicand})"


RADICAL_ZERO = RadicalCoefficient(GAUSSIAN_ZERO, 0)
RADICAL_ONE = RadicalCoefficient(GAUSSIAN_ONE, 1)


def radical_normalize(rational, radicand) -> RadicalCoefficient:
    """Public canonicalization entry point (see RadicalCoefficient.normalize)."""
    return RadicalCoefficient.normalize(rational, radicand)
