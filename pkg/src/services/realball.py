"""
Midpoint-radius real arithmetic

A RealBall is an mpmath midpoint with a rigorous radius. Midpoints are
computed with explicit `prec=` arguments and round to nearest; the
rounding error of every operation is added to the radius. Radii are
combined at 64 bits rounding upward, so they only ever grow.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Union

import mpmath
from mpmath import mpf

from ..core.interfaces import DomainError


RAD_PREC = 64
EXTRA_ULPS = 4
ZERO = mpf(0)

Number = Union[int, Fraction, "RealBall"]


def exact_int(n: int) -> mpf:
    """An mpf holding the integer n exactly."""
    return mpf(n, prec=max(abs(n).bit_length(), 1) + 1)


def _up(x) -> mpf:
    return mpf(x, prec=RAD_PREC, rounding='u')


def _rad_add(*values) -> mpf:
    total = ZERO
    for value in values:
        total = mpmath.fadd(total, value, prec=RAD_PREC, rounding='u')
    return total


def _rad_mul(x, y) -> mpf:
    return mpmath.fmul(x, y, prec=RAD_PREC, rounding='u')


def _rounding_error(value: mpf, prec: int, ulps: int = 1) -> mpf:
    """Upper bound for the error of rounding `value` to `prec` bits."""
    if not value:
        return ZERO
    return mpmath.ldexp(mpf(ulps), mpmath.mag(value) - prec)


@dataclass(frozen=True)
class RealBall:
    """Closed interval [mid - rad, mid + rad] known to contain a real number"""
    mid: mpf
    rad: mpf
    prec: int = 128

    # --- construction -------------------------------------------------

    @classmethod
    def exact(cls, value: Union[int, Fraction], prec: int = 128) -> "RealBall":
        """Ball around an exact rational; zero radius when the rational is dyadic."""
        return cls.from_fraction(Fraction(value), prec)

    @classmethod
    def from_fraction(cls, q: Fraction, prec: int = 128) -> "RealBall":
        num, den = q.numerator, q.denominator
        if den & (den - 1) == 0:
            mid = mpmath.ldexp(exact_int(num), -(den.bit_length() - 1))
            return cls._rounded(mid, ZERO, prec)
        mid = mpmath.fdiv(exact_int(num), exact_int(den), prec=prec)
        return cls(mid, _rounding_error(mid, prec), prec)

    @classmethod
    def from_fixed(cls, value: int, shift: int, err_units: int, prec: int) -> "RealBall":
        """Ball for the fixed-point number value * 2^-shift with err_units units of error."""
        mid = mpmath.ldexp(exact_int(value), -shift)
        rad = mpmath.ldexp(_up(err_units), -shift)
        return cls._rounded(mid, rad, prec)

    @classmethod
    def from_mpf(cls, value, rad=0, prec: int = 128) -> "RealBall":
        """Ball for an mpf or float midpoint with an explicit radius."""
        mid = mpf(value, prec=max(prec, 53))
        return cls._rounded(mid, _up(abs(mpf(rad))), prec)

    @classmethod
    def _rounded(cls, mid: mpf, rad: mpf, prec: int) -> "RealBall":
        rounded = mpf(mid, prec=prec)
        error = abs(mpmath.fsub(mid, rounded, exact=True))
        return cls(rounded, _rad_add(rad, error), prec)

    @classmethod
    def pi(cls, prec: int = 128) -> "RealBall":
        with mpmath.workprec(prec + 20):
            value = +mpmath.pi
        return cls(mpf(value, prec=prec), _rounding_error(value, prec, EXTRA_ULPS), prec)

    @classmethod
    def log2(cls, prec: int = 128) -> "RealBall":
        with mpmath.workprec(prec + 20):
            value = +mpmath.ln2
        return cls(mpf(value, prec=prec), _rounding_error(value, prec, EXTRA_ULPS), prec)

    # --- arithmetic ---------------------------------------------------

    def _coerce(self, other: Number) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        if isinstance(other, (int, Fraction)):
            return RealBall.from_fraction(Fraction(other), self.prec)
        raise TypeError(f"Cannot combine RealBall with {type(other).__name__}")

    def __add__(self, other: Number) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = mpmath.fadd(self.mid, other.mid, prec=prec)
        rad = _rad_add(self.rad, other.rad, _rounding_error(mid, prec))
        return RealBall(mid, rad, prec)

    __radd__ = __add__

    def __neg__(self) -> "RealBall":
        return RealBall(-self.mid, self.rad, self.prec)

    def __sub__(self, other: Number) -> "RealBall":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "RealBall":
        return self._coerce(other) - self

    def __mul__(self, other: Number) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = mpmath.fmul(self.mid, other.mid, prec=prec)
        rad = _rad_add(
            _rad_mul(abs(self.mid), other.rad),
            _rad_mul(abs(other.mid), self.rad),
            _rad_mul(self.rad, other.rad),
            _rounding_error(mid, prec),
        )
        return RealBall(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "RealBall":
        other = self._coerce(other)
        if not other.excludes_zero():
            raise DomainError("Division by a ball containing zero")
        prec = max(self.prec, other.prec)
        mid = mpmath.fdiv(self.mid, other.mid, prec=prec)
        low = mpmath.fsub(abs(other.mid), other.rad, prec=RAD_PREC, rounding='d')
        numerator = _rad_add(
            _rad_mul(abs(self.mid), other.rad),
            _rad_mul(abs(other.mid), self.rad),
        )
        denominator = mpmath.fmul(abs(other.mid), low, prec=RAD_PREC, rounding='d')
        rad = _rad_add(
            mpmath.fdiv(numerator, denominator, prec=RAD_PREC, rounding='u'),
            _rounding_error(mid, prec),
        )
        return RealBall(mid, rad, prec)

    def __rtruediv__(self, other: Number) -> "RealBall":
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "RealBall":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("Only non-negative integer powers are supported")
        result = RealBall.exact(1, self.prec)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def log(self) -> "RealBall":
        """Natural logarithm; the ball must lie in (0, inf)."""
        if self.mid <= 0 or not self.excludes_zero():
            raise DomainError("log of a ball that is not strictly positive")
        with mpmath.workprec(self.prec + 20):
            value = mpmath.log(self.mid)
        mid = mpf(value, prec=self.prec)
        low = mpmath.fsub(self.mid, self.rad, prec=RAD_PREC, rounding='d')
        rad = _rad_add(
            mpmath.fdiv(self.rad, low, prec=RAD_PREC, rounding='u'),
            _rounding_error(value, self.prec, EXTRA_ULPS),
        )
        return RealBall(mid, rad, self.prec)

    def ldexp(self, n: int) -> "RealBall":
        """Exact scaling by 2^n."""
        return RealBall(mpmath.ldexp(self.mid, n), mpmath.ldexp(self.rad, n), self.prec)

    # --- queries ------------------------------------------------------

    def excludes_zero(self) -> bool:
        return abs(self.mid) > self.rad

    def contains(self, value) -> bool:
        """True if an exact number (int, Fraction, mpf or float) lies in the ball"""
        if isinstance(value, Fraction):
            value = mpmath.fdiv(exact_int(value.numerator), exact_int(value.denominator),
                                prec=self.prec + 64)
        return abs(mpmath.fsub(self.mid, value, exact=True)) <= self.rad

    def overlaps(self, other: "RealBall") -> bool:
        gap = abs(mpmath.fsub(self.mid, other.mid, exact=True))
        return gap <= _rad_add(self.rad, other.rad)

    def upper(self) -> mpf:
        return _rad_add(abs(self.mid), self.rad)

    def meets_precision(self, prec: Optional[int] = None) -> bool:
        """True if rad <= 2^(1-prec) * max(1, |mid|), prec defaulting to the ball's own."""
        prec = prec or self.prec
        scale = max(mpf(1), abs(self.mid))
        return self.rad <= mpmath.ldexp(scale, 1 - prec)

    def with_prec(self, prec: int) -> "RealBall":
        """Round the midpoint to `prec` bits, widening the radius accordingly."""
        return RealBall._rounded(self.mid, self.rad, prec)

    def digits(self) -> int:
        """Significant decimal digits justified by the radius."""
        if not self.mid:
            return 1
        magnitude = int(mpmath.floor(mpmath.log10(abs(self.mid)))) + 1
        if not self.rad:
            return max(1, int(self.prec * 0.30103))
        accuracy = int(mpmath.floor(-mpmath.log10(self.rad)))
        return max(1, magnitude + accuracy)

    def mid_str(self) -> str:
        return mpmath.nstr(self.mid, self.digits(), min_fixed=-5, max_fixed=20)

    def rad_str(self) -> str:
        return f"{float(self.rad):.2e}"

    def __str__(self) -> str:
        return f"{self.mid_str()} ± {self.rad_str()}"

    def to_dict(self) -> Dict[str, Any]:
        return {"mid": self.mid_str(), "rad": self.rad_str(), "prec": self.prec}


def ball_sum(values: Iterable[RealBall], prec: int = 128) -> RealBall:
    total = RealBall.exact(0, prec)
    for value in values:
        total = total + value
    return total
