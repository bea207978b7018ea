"""The doubled unit interval and its exact partial arithmetic.

The carrier consists of tagged rationals: an *exact* point ``q^o`` for every
rational q in [0, 1] and an *approximation* point ``r^-`` for every rational r
in (0, 1].  The order is the unique total order that restricts to the usual
order on values and places ``r^-`` immediately below ``r^o``; in particular
``0^o`` is the bottom element and ``1^o`` the top.  Exact points are values a
counting process can achieve; approximation points are limits approached
strictly from below.

Three pieces of partial arithmetic live here:

* ``mip(x, y)`` - truncated subtraction, defined for y <= x;
* ``miss(x, y)`` - the co-subtraction, defined for y <= x, obtained as the
  supremum of ``mip(x, q^o)`` over exact q with y < q^o <= x;
* ``plus(x, y)`` - partial addition, defined when the values sum to at most 1,
  left adjoint to ``mip`` in its first argument.

The collapse map ``gamma_collapse`` forgets tags, its right-adjoint section
``iota_exact`` tags rationals as exact, and its left-adjoint section
``iota_approx`` tags positive rationals as approximations.  Only rational
points are representable, so every case split in the arithmetic lands in the
rational branch; all computation uses ``fractions.Fraction`` and is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import DomainError, ParseError

Rational = Fraction


class Ordering(enum.Enum):
    """Outcome of a three-way comparison."""

    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True, order=True)
class GammaValue:
    """A point of the doubled unit interval: a rational tagged exact or approx.

    Field order matters: dataclass ordering compares ``(value, exact)``
    lexicographically, which is exactly the intended total order because
    ``False < True`` puts the approximation immediately below the exact point
    of the same value.
    """

    value: Fraction
    exact: bool

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        v = self.value
        if self.exact:
            if not 0 <= v <= 1:
                raise DomainError(f"exact point {v} lies outside [0, 1]")
        elif not 0 < v <= 1:
            raise DomainError(f"approximation point {v} lies outside (0, 1]")

    @property
    def kind(self) -> str:
        return "exact" if self.exact else "approx"

    def __str__(self) -> str:
        return format_gamma(self)

    def __repr__(self) -> str:
        return f"GammaValue({format_gamma(self)!r})"


ZERO = GammaValue(Fraction(0), True)
ONE = GammaValue(Fraction(1), True)
ONE_APPROX = GammaValue(Fraction(1), False)


def compare(x: GammaValue, y: GammaValue) -> Ordering:
    """Three-way comparison in the total order of the doubled interval."""
    if x == y:
        return Ordering.EQ
    return Ordering.LT if x < y else Ordering.GT


def mip(x: GammaValue, y: GammaValue) -> GammaValue:
    """Truncated subtraction ``x - y``, defined for y <= x.

    Exact minuend gives an exact result; an approximation minuend gives an
    approximation unless the subtrahend is one too, in which case the rational
    difference is achieved exactly.
    """
    if not y <= x:
        raise DomainError(f"mip undefined: {y} > {x}")
    d = x.value - y.value
    if x.exact:
        return GammaValue(d, True)
    if y.exact:
        # y^o <= x^- forces a strictly positive difference.
        return GammaValue(d, False)
    return GammaValue(d, True)


def miss(x: GammaValue, y: GammaValue) -> GammaValue:
    """Co-subtraction ``x ~ y``, defined for y <= x.

    Equals the supremum of ``mip(x, q^o)`` over exact q^o in (y, x]; on the
    diagonal it is 0^o.  Dual to ``mip``: the result is an approximation
    unless the subtrahend alone carries the approximation tag.
    """
    if not y <= x:
        raise DomainError(f"miss undefined: {y} > {x}")
    if x == y:
        return ZERO
    d = x.value - y.value
    if x.exact and not y.exact:
        return GammaValue(d, True)
    # Remaining cases have y < x with equal-or-stronger minuend tag, so d > 0.
    return GammaValue(d, False)


def plus(x: GammaValue, y: GammaValue) -> GammaValue:
    """Partial addition, defined when the underlying values sum to at most 1.

    The domain condition is equivalent to ``x <= mip(ONE, y)``.  The sum is
    exact precisely when both summands are.
    """
    s = x.value + y.value
    if s > 1:
        raise DomainError(f"plus undefined: {x} + {y} exceeds 1")
    return GammaValue(s, x.exact and y.exact)


def gamma_sum(xs: Iterable[GammaValue]) -> GammaValue:
    """Left fold of ``plus`` over ``xs``; the empty sum is 0^o.

    ``plus`` is commutative and associative on its domain, so the result does
    not depend on the ordering whenever every partial sum is defined.
    """
    acc = ZERO
    for x in xs:
        acc = plus(acc, x)
    return acc


def gamma_collapse(x: GammaValue) -> Fraction:
    """Forget the tag, collapsing both copies of a rational onto it."""
    return x.value


def iota_exact(r: Fraction) -> GammaValue:
    """Tag a rational in [0, 1] as an exact point (right adjoint to collapse)."""
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise DomainError(f"{r} lies outside [0, 1]")
    return GammaValue(r, True)


def iota_approx(r: Fraction) -> GammaValue:
    """Tag a rational as an approximation (left adjoint to collapse).

    0 has no approximation below it, so it maps to the bottom element 0^o.
    """
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise DomainError(f"{r} lies outside [0, 1]")
    if r == 0:
        return ZERO
    return GammaValue(r, False)


def format_gamma(x: GammaValue) -> str:
    """Canonical text form: lowest-terms rational, ``^o`` exact, ``^-`` approx."""
    return f"{x.value}^{'o' if x.exact else '-'}"


def parse_gamma(text: str) -> GammaValue:
    """Parse the canonical text form, accepting non-lowest-terms rationals."""
    i = 0
    n = len(text)

    def skip_ws(j: int) -> int:
        while j < n and text[j].isspace():
            j += 1
        return j

    def read_digits(j: int, what: str) -> tuple[int, int]:
        start = j
        while j < n and text[j].isdigit():
            j += 1
        if j == start:
            raise ParseError(f"expected {what}", column=j + 1)
        return int(text[start:j]), j

    i = skip_ws(i)
    num, i = read_digits(i, "a numerator digit")
    den = 1
    if i < n and text[i] == "/":
        den_col = i + 2
        den, i = read_digits(i + 1, "a denominator digit")
        if den == 0:
            raise ParseError("zero denominator", column=den_col)
    if i >= n or text[i] != "^":
        raise ParseError("expected '^'", column=i + 1)
    i += 1
    if i >= n or text[i] not in "o-":
        raise ParseError("expected 'o' or '-' after '^'", column=i + 1)
    exact = text[i] == "o"
    i = skip_ws(i + 1)
    if i != n:
        raise ParseError("unexpected trailing input", column=i + 1)
    value = Fraction(num, den)
    try:
        return GammaValue(value, exact)
    except DomainError as exc:
        raise ParseError(str(exc), column=1) from exc


@dataclass(frozen=True)
class GammaGrid:
    """The finite subdomain {0^o} and {(a/k)^-, (a/k)^o : 1 <= a <= k}.

    Serves as an exhaustive test universe: 2k + 1 points, totally ordered.
    """

    k: int
    points: tuple[GammaValue, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError("grid resolution must be positive")
        pts: list[GammaValue] = [ZERO]
        for a in range(1, self.k + 1):
            q = Fraction(a, self.k)
            pts.append(GammaValue(q, False))
            pts.append(GammaValue(q, True))
        object.__setattr__(self, "points", tuple(pts))

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def grid_rationals(k: int) -> tuple[Fraction, ...]:
    """The chain of rationals {0, 1/k, ..., 1} underlying ``GammaGrid(k)``."""
    if k < 1:
        raise DomainError("grid resolution must be positive")
    return tuple(Fraction(a, k) for a in range(k + 1))
