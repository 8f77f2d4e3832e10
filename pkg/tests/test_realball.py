from fractions import Fraction

import mpmath
import pytest

from src.core.interfaces import DomainError
from src.services.realball import RealBall, ball_sum

with mpmath.workprec(300):
    PI = +mpmath.pi
    LOG2 = +mpmath.ln2
    PI2_OVER_6 = mpmath.pi ** 2 / 6


def test_dyadic_rationals_are_exact():
    assert RealBall.exact(1).rad == 0
    assert RealBall.exact(Fraction(3, 4)).rad == 0
    assert RealBall.exact(-5, 64).mid == -5


def test_non_dyadic_rationals_are_enclosed():
    third = RealBall.exact(Fraction(1, 3))
    assert third.rad > 0
    assert third.contains(Fraction(1, 3))
    assert not third.contains(Fraction(1, 3) + Fraction(1, 2 ** 100))


def test_arithmetic_encloses_exact_results():
    third = RealBall.exact(Fraction(1, 3))
    assert (third * 3).contains(1)
    assert (third - third).contains(0)
    assert (third + third + third).contains(1)
    assert (1 - third).contains(Fraction(2, 3))
    assert (1 / third).contains(3)
    assert (third ** 3).contains(Fraction(1, 27))
    assert (third ** 0).contains(1)


def test_constants(encloses):
    encloses(RealBall.pi(128), PI, tol=0)
    encloses(RealBall.log2(128), LOG2, tol=0)
    encloses(RealBall.exact(2).log(), LOG2, tol=0)
    encloses(RealBall.pi(128) ** 2 / 6, PI2_OVER_6, tol=0)


def test_division_by_ball_containing_zero():
    with pytest.raises(DomainError):
        RealBall.exact(1) / RealBall.exact(0)
    with pytest.raises(DomainError):
        RealBall.exact(1) / RealBall.from_mpf(0.5, 1)


def test_log_needs_positive_ball():
    with pytest.raises(DomainError):
        RealBall.exact(-2).log()


def test_only_non_negative_integer_powers():
    with pytest.raises(DomainError):
        RealBall.exact(2) ** -1


def test_floats_are_not_coerced():
    with pytest.raises(TypeError):
        RealBall.exact(1) + 0.5


def test_ldexp_is_exact():
    x = RealBall.exact(Fraction(3, 4)).ldexp(3)
    assert x.mid == 6
    assert x.rad == 0


def test_overlaps():
    a = RealBall.from_mpf(1, 0.1)
    b = RealBall.from_mpf(1.15, 0.1)
    c = RealBall.from_mpf(1.5, 0.1)
    assert a.overlaps(b) and b.overlaps(a)
    assert not a.overlaps(c)


def test_with_prec_widens_radius():
    x = RealBall.pi(256)
    rounded = x.with_prec(64)
    assert rounded.prec == 64
    assert rounded.rad >= x.rad
    assert rounded.contains(PI)


def test_text_forms():
    x = RealBall.pi(128)
    assert str(x).startswith("3.14159265358979323846")
    assert "±" in str(x)
    assert set(x.to_dict()) == {"mid", "rad", "prec"}
    assert RealBall.exact(1).digits() == 38


def test_ball_sum():
    total = ball_sum([RealBall.exact(Fraction(1, 3))] * 3)
    assert total.contains(1)
    assert ball_sum([]).mid == 0


def test_meets_precision():
    assert RealBall.pi(128).meets_precision()
    assert RealBall.from_mpf(1000, mpmath.ldexp(1, -120), 128).meets_precision()
    assert not RealBall.from_mpf(mpmath.mpf("0.5"), mpmath.ldexp(1, -100), 128).meets_precision()
    assert RealBall.from_mpf(mpmath.mpf("0.5"), mpmath.ldexp(1, -100), 128).meets_precision(64)
