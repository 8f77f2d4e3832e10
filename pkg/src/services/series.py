"""
Fixed-point series kernels

Multi-polylogarithms Li(k;z) and their level-2 counterparts A(k;z) are
summed in integer fixed point with `p + guard_bits` fractional bits. Every
floor division contributes at most one unit of error; the kernels count
those units and add a rigorous truncation bound, so the resulting
RealBall always encloses the true value.
"""

import logging
import math
from fractions import Fraction
from typing import Sequence, Tuple, Union

from ..core.interfaces import DomainError, PrecisionUnreachable
from .realball import RealBall

logger = logging.getLogger(__name__)

Argument = Union[int, float, str, Fraction]

MIN_TERMS = 8


def to_fraction(z: Argument) -> Fraction:
    """
    Exact rational for an argument. Floats are read through their shortest
    repr, so 0.3 means 3/10 rather than the nearest binary double.
    """
    if isinstance(z, Fraction):
        return z
    if isinstance(z, float):
        return Fraction(repr(z))
    return Fraction(z)


def check_unit_interval(z: Argument) -> Fraction:
    """Return z as a Fraction, raising DomainError unless 0 < z < 1."""
    q = to_fraction(z)
    if not 0 < q < 1:
        raise DomainError(f"Argument {z} is outside (0, 1)")
    return q


def one_minus(z: Argument) -> Fraction:
    return 1 - check_unit_interval(z)


def level2_frac(z: Argument) -> Fraction:
    """(1 - z)/(1 + z), exactly."""
    q = check_unit_interval(z)
    return (1 - q) / (1 + q)


def log2_tail_bound(terms: int, z: Fraction, depth: int) -> float:
    """
    log2 of an upper bound for sum_{m > M} m^(r-1) z^m, or +inf when the
    ratio bound is not yet below one.
    """
    q = float(z) * ((terms + 2) / (terms + 1)) ** (depth - 1)
    if q >= 1:
        return math.inf
    return ((depth - 1) * math.log2(terms + 1)
            + (terms + 1) * math.log2(float(z))
            - math.log2(1 - q))


def choose_terms(z: Fraction, depth: int, target_bits: int, step_budget: int) -> Tuple[int, int]:
    """
    Smallest term count M (found by doubling then bisection) whose tail
    bound is below 2^-target_bits.

    Returns:
        (M, e) where 2^e rigorously bounds the tail

    Raises:
        PrecisionUnreachable: if M would exceed the step budget
    """
    def ok(m: int) -> bool:
        return log2_tail_bound(m, z, depth) <= -target_bits

    high = MIN_TERMS
    while not ok(high):
        high *= 2
        if high > 2 * step_budget:
            break
    if not ok(high):
        raise PrecisionUnreachable(
            f"More than {step_budget} terms needed at z={float(z):.6g} for {target_bits} bits"
        )
    low = high // 2 if high > MIN_TERMS else MIN_TERMS
    while low < high:
        middle = (low + high) // 2
        if ok(middle):
            high = middle
        else:
            low = middle + 1
    if high > step_budget:
        raise PrecisionUnreachable(
            f"{high} terms needed at z={float(z):.6g}, budget is {step_budget}"
        )
    # float log2 is only approximate; two extra bits absorb its error
    exponent = math.ceil(log2_tail_bound(high, z, depth)) + 2
    return high, exponent


def nested_series(k: Sequence[int], z: Fraction, precision: int, guard_bits: int,
                  step_budget: int, parity: bool = False) -> RealBall:
    """
    Sum the nested series for Li(k;z), or for A(k;z)/2^r when `parity` is set.

    Args:
        k: Non-empty positive index
        z: Exact argument in (0, 1)
        precision: Requested precision p in bits
        guard_bits: Extra fractional bits carried by the fixed-point sums
        step_budget: Maximum number of outer terms
        parity: Restrict the summation to m_i = i (mod 2)

    Returns:
        RealBall at precision p enclosing the series value
    """
    depth = len(k)
    wp = precision + guard_bits
    target_bits = precision + 4 + (depth if parity else 0)
    terms, tail_exp = choose_terms(z, depth, target_bits, step_budget)
    one = 1 << wp
    num, den = z.numerator, z.denominator

    # partial[j] holds the sum over the first j levels with m_j < m
    partial = [one] + [0] * (depth - 1)
    zp = one
    total = 0
    for m in range(1, terms + 1):
        zp = zp * num // den
        if not parity or (m - depth) % 2 == 0:
            total += ((zp * partial[depth - 1]) >> wp) // m ** k[depth - 1]
        for j in range(depth - 1, 0, -1):
            if not parity or (m - j) % 2 == 0:
                partial[j] += partial[j - 1] // m ** k[j - 1]

    # zp carries at most 1/(1-z) units; every level adds at most one per step
    inv_gap = math.ceil(1 / (1 - z))
    s_max = (partial[depth - 1] >> wp) + 1
    err_units = terms * (s_max * inv_gap + 2) + (depth - 1) * terms * inv_gap + 1
    tail_units = 1 << (tail_exp + wp) if tail_exp + wp >= 0 else 1
    logger.debug(f"series depth={depth} z={z} terms={terms} parity={parity}")
    return RealBall.from_fixed(total, wp, err_units + tail_units, precision)


def li_series(k: Sequence[int], z: Argument, precision: int = 128, guard_bits: int = 32,
              step_budget: int = 200000) -> RealBall:
    """Li(k;z) by direct summation; Li(∅;z) = 1."""
    q = check_unit_interval(z)
    if not k:
        return RealBall.exact(1, precision)
    return nested_series(k, q, precision, guard_bits, step_budget)


def a_series(k: Sequence[int], z: Argument, precision: int = 128, guard_bits: int = 32,
             step_budget: int = 200000) -> RealBall:
    """A(k;z) = 2^r times the parity-restricted sum; A(∅;z) = 1."""
    q = check_unit_interval(z)
    if not k:
        return RealBall.exact(1, precision)
    return nested_series(k, q, precision, guard_bits, step_budget, parity=True).ldexp(len(k))


def _power_over_factorial(base: RealBall, d: int) -> RealBall:
    return (base ** d) / math.factorial(d)


def li_ones(d: int, z: Argument, precision: int = 128) -> RealBall:
    """Li({1}^d; z) = (-log(1-z))^d / d!."""
    q = check_unit_interval(z)
    if d == 0:
        return RealBall.exact(1, precision)
    base = -RealBall.exact(1 - q, precision + 8).log()
    return _power_over_factorial(base, d).with_prec(precision)


def a_ones(d: int, z: Argument, precision: int = 128) -> RealBall:
    """A({1}^d; z) = (2 artanh z)^d / d! = (log((1+z)/(1-z)))^d / d!."""
    q = check_unit_interval(z)
    if d == 0:
        return RealBall.exact(1, precision)
    base = RealBall.exact((1 + q) / (1 - q), precision + 8).log()
    return _power_over_factorial(base, d).with_prec(precision)


def a_ones_frac(d: int, z: Argument, precision: int = 128) -> RealBall:
    """A({1}^d; (1-z)/(1+z)) = (-log z)^d / d!."""
    q = check_unit_interval(z)
    if d == 0:
        return RealBall.exact(1, precision)
    base = -RealBall.exact(q, precision + 8).log()
    return _power_over_factorial(base, d).with_prec(precision)


def log_ball(z: Argument, precision: int = 128) -> RealBall:
    """log z for an exact argument in (0, 1)."""
    return RealBall.exact(check_unit_interval(z), precision).log()
