"""Exact arithmetic kernel: big rationals, rigorous enclosures, ``dist`` and ``frac``.

Two number representations are used everywhere in this package:

* exact rationals, carried by :class:`fractions.Fraction` (aliased
  ``Rational``), which the stdlib keeps in canonical form (positive
  denominator, reduced); and
* :class:`Real`, a midpoint/radius enclosure whose midpoint and radius are
  themselves exact rationals.  An exact value is simply a ``Real`` with
  radius zero.

Ball arithmetic on ``Real`` is exact (no rounding step ever widens an
interval silently); radii enter only through declared input uncertainty and
through transcendental evaluations, which are performed with mpmath's
interval context and therefore carry certified outward-rounded endpoints.
Comparisons whose outcome is not decidable outside the radius raise
:class:`~radixapprox.errors.IndeterminateComparison` instead of guessing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath

from .errors import DomainError, IndeterminateComparison

Rational = Fraction

#: Default significand size (bits) for approximate inputs and for
#: transcendental evaluations.  Configurable per call.
DEFAULT_PRECISION = 128

_GUARD_BITS = 16

Scalar = Union[int, Fraction]

_NAMED_CONSTANTS = ("sqrt2", "pi", "e")


def mpf_to_fraction(x) -> Fraction:
    """Convert an mpmath float to the exact rational it represents."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise DomainError("cannot convert a non-finite value to a rational")
    # the mantissa may be a gmpy2 integer; keep Fractions on python ints
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def float_down(x: Fraction) -> float:
    """Largest double <= x."""
    f = float(x)
    while Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(x: Fraction) -> float:
    """Smallest double >= x."""
    f = float(x)
    while Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def frac_exact(x: Fraction) -> Fraction:
    """Fractional part {x} in [0, 1), floor convention."""
    return x - (x.numerator // x.denominator)


def dist_exact(x: Fraction) -> Fraction:
    """Distance from x to the nearest integer, exactly."""
    f = frac_exact(x)
    return min(f, 1 - f)


@dataclass(frozen=True)
class Real:
    """A real number known to lie in [mid - rad, mid + rad]."""

    mid: Fraction
    rad: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if self.rad < 0:
            raise DomainError("error radius must be non-negative")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, value: Scalar | str) -> "Real":
        return cls(Fraction(value))

    @classmethod
    def approx(cls, mid: Scalar, rad: Scalar) -> "Real":
        return cls(Fraction(mid), Fraction(rad))

    @classmethod
    def from_interval(cls, lo: Fraction, hi: Fraction) -> "Real":
        if hi < lo:
            raise DomainError("empty interval")
        half = (hi - lo) / 2
        return cls(lo + half, half)

    @classmethod
    def parse(cls, text: str, precision_bits: int = DEFAULT_PRECISION) -> "Real":
        """Parse a number from CLI-style input.

        ``p/q`` and decimal literals become the exact rational of the
        literal.  The named constants ``sqrt2``, ``pi`` and ``e`` expand to
        an enclosure with ``precision_bits`` significant bits; the artifact
        never claims more about such an input than this interval.
        """
        text = text.strip()
        if text in _NAMED_CONSTANTS:
            with mpmath.workprec(precision_bits + _GUARD_BITS):
                if text == "sqrt2":
                    mid = mpf_to_fraction(mpmath.sqrt(2))
                elif text == "pi":
                    mid = mpf_to_fraction(+mpmath.pi)
                else:
                    mid = mpf_to_fraction(+mpmath.e)
            return cls(mid, Fraction(4, 2**precision_bits))
        try:
            return cls(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {text!r} as a number") from exc

    # -- basic queries ------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    @property
    def lo(self) -> Fraction:
        return self.mid - self.rad

    @property
    def hi(self) -> Fraction:
        return self.mid + self.rad

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Real({self.mid})"
        return f"Real({self.mid} +/- {self.rad})"

    # -- exact ball arithmetic ----------------------------------------

    def _coerce(self, other) -> "Real":
        if isinstance(other, Real):
            return other
        if isinstance(other, (int, Fraction)):
            return Real(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Real(self.mid + o.mid, self.rad + o.rad)

    __radd__ = __add__

    def __neg__(self):
        return Real(-self.mid, self.rad)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Real(self.mid - o.mid, self.rad + o.rad)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_exact:
            c = o.mid
            return Real(self.mid * c, self.rad * abs(c))
        if self.is_exact:
            return o.__mul__(self)
        corners = [a * b for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return Real.from_interval(min(corners), max(corners))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Real.from_interval(Fraction(0), max(-self.lo, self.hi))

    # -- comparisons ---------------------------------------------------
    #
    # True/False only when certain; otherwise IndeterminateComparison.
    # Two exact values always compare decidably.

    def _cmp(self, other, certain_true, certain_false, name):
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Real with {type(other).__name__}")
        if certain_true(self, o):
            return True
        if certain_false(self, o):
            return False
        raise IndeterminateComparison(
            f"{self!r} {name} {o!r} straddles the error radius"
        )

    def __lt__(self, other):
        return self._cmp(other, lambda a, b: a.hi < b.lo, lambda a, b: a.lo >= b.hi, "<")

    def __le__(self, other):
        return self._cmp(other, lambda a, b: a.hi <= b.lo, lambda a, b: a.lo > b.hi, "<=")

    def __gt__(self, other):
        return self._cmp(other, lambda a, b: a.lo > b.hi, lambda a, b: a.hi <= b.lo, ">")

    def __ge__(self, other):
        return self._cmp(other, lambda a, b: a.lo >= b.hi, lambda a, b: a.hi < b.lo, ">=")


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def frac(x: Real) -> Real:
    """Fractional part {x} in [0, 1); x - {x} is an integer.

    In approximate mode the enclosure must stay inside one unit interval,
    since the map jumps at integers; otherwise the result is indeterminate.
    """
    if x.is_exact:
        return Real(frac_exact(x.mid))
    k_lo = _floor_fraction(x.lo)
    if x.hi - k_lo >= 1:
        raise IndeterminateComparison(
            f"fractional part of {x!r} straddles an integer boundary"
        )
    return Real(x.mid - k_lo, x.rad)


def dist_to_nearest_int(x: Real) -> Real:
    """Distance from x to the nearest integer, in [0, 1/2].

    Exact input gives an exact output.  Approximate input gives the exact
    range of the (continuous) distance function over the enclosure; no
    comparison is performed here, so no indeterminacy can arise.
    """
    if x.is_exact:
        return Real(dist_exact(x.mid))
    if x.rad >= Fraction(1, 2):
        return Real.from_interval(Fraction(0), Fraction(1, 2))
    lo, hi = x.lo, x.hi
    vals = [dist_exact(lo), dist_exact(hi)]
    gmin = Fraction(0) if _ceil_fraction(lo) <= _floor_fraction(hi) else min(vals)
    half = Fraction(1, 2)
    has_half = _ceil_fraction(lo - half) <= _floor_fraction(hi - half)
    gmax = half if has_half else max(vals)
    return Real.from_interval(gmin, gmax)


def _raw_to_fraction(t) -> Fraction:
    """Exact rational value of a libmp raw (sign, man, exp, bc) tuple."""
    sign, man, exp, _ = t
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def iv_from_fractions(ctx, lo: Fraction, hi: Fraction):
    """Certified interval enclosing [lo, hi] in the given iv context."""
    a = ctx.mpf(lo.numerator) / ctx.mpf(lo.denominator)
    b = ctx.mpf(hi.numerator) / ctx.mpf(hi.denominator)
    return ctx.mpf([a.a, b.b])


def iv_to_real(value) -> Real:
    """Exact Real enclosure of an mpmath interval (no further rounding)."""
    a, b = value._mpi_
    return Real.from_interval(_raw_to_fraction(a), _raw_to_fraction(b))


def cos_bound_margin(x: Real, precision_bits: int = DEFAULT_PRECISION) -> Real:
    """Slack of the inequality |cos(pi*x)| <= 1 - pi*||x||^2.

    Returns (1 - pi*||x||^2) - |cos(pi*x)| as a certified enclosure; the
    inequality asserts this is >= 0 for every real x.  Transcendental parts
    are evaluated with mpmath interval arithmetic at the requested precision.
    """
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = precision_bits + _GUARD_BITS
        w = dist_to_nearest_int(x)
        w_iv = iv_from_fractions(iv, w.lo, w.hi)
        # |cos(pi*t)| is 1-periodic and even, so reduce an exact argument to
        # its fractional part; a genuine interval goes in as-is.
        if x.is_exact:
            f = frac_exact(x.mid)
            arg = iv_from_fractions(iv, f, f)
        else:
            arg = iv_from_fractions(iv, x.lo, x.hi)
        cos_abs = abs(iv.cos(iv.pi * arg))
        margin = (1 - iv.pi * w_iv**2) - cos_abs
        return iv_to_real(margin)
    finally:
        iv.prec = old
