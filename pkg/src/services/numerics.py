"""
Numerical evaluation services

The Evaluator computes multiple zeta values, multiple T-values,
multi-polylogarithms and the Arakawa-Kaneko type constants at positive
integer arguments as RealBalls. Results are memoized per instance and,
for the named constants, stored in an optional persistent ConstantCache.

MZVs are computed by splitting the iterated integral at 1/2:

    zeta(w) = sum_i Li(w[:i]; 1/2) * Li(w[i:]^*; 1/2)

where w^* reverses a word and swaps e0 and e1. MTVs use the same idea
with the involution t -> (1-t)/(1+t), which exchanges dt/t and
2dt/(1-t^2) and maps 1/3 to 1/2:

    T(w) = sum_i A(w[:i]; 1/3) * A(w[i:]^*; 1/2)

so every series converges geometrically.

The fallback method ("direct") sums the nested series for a few hundred
terms and closes every tail with an Euler-Maclaurin expansion, reaching
the same precision without the split.
"""

import logging
import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import mpmath

from ..core.interfaces import (
    ConstantCache, DomainError, EmptyIndex, NotAdmissible, PrecisionUnreachable
)
from .index_core import (
    Index, add, binom_b, check_positive, compositions, depth, dual, e_plus,
    format_index, is_admissible
)
from .realball import RealBall, ball_sum
from .series import (
    Argument, a_ones, a_ones_frac, a_series, check_unit_interval, li_ones, li_series,
    log_ball
)
from .word_algebra import E0, E1, WordSum, index_to_word, word_to_index

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
DIRECT_MIN_TERMS = 64


class ConstTag(Enum):
    """Kinds of named constants"""
    MZV = "MZV"
    MTV = "MTV"
    XI = "XI"
    PSI = "PSI"
    EZ_INT = "EZ_INT"
    T_INT = "T_INT"


LEVEL2_TAGS = {ConstTag.MTV, ConstTag.PSI, ConstTag.T_INT}


@dataclass(frozen=True)
class ConstKind:
    """
    A named constant: zeta(k), T(k), xi(k;m), psi(k;m), zeta(k;m) or T(k;m).

    Raises:
        NotAdmissible: MZV/MTV with a non-admissible index
        EmptyIndex: XI/PSI with the empty index
        DomainError: an argument outside its range
    """
    tag: ConstTag
    index: Index = ()
    arg: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "index", check_positive(self.index))
        if self.tag in (ConstTag.MZV, ConstTag.MTV):
            if not is_admissible(self.index):
                raise NotAdmissible(f"{self.tag.value} needs an admissible index, got {format_index(self.index)}")
            if self.arg is not None:
                raise DomainError(f"{self.tag.value} takes no argument")
        elif self.tag in (ConstTag.XI, ConstTag.PSI):
            if not self.index:
                raise EmptyIndex(f"{self.tag.value} needs a non-empty index")
            if self.arg is None or self.arg < 1:
                raise DomainError(f"{self.tag.value} needs m >= 1, got {self.arg}")
        else:
            if self.arg is None or self.arg < 2:
                raise DomainError(f"{self.tag.value} needs m >= 2, got {self.arg}")

    @property
    def is_unit(self) -> bool:
        """zeta(∅) and T(∅) are 1."""
        return self.tag in (ConstTag.MZV, ConstTag.MTV) and not self.index

    @property
    def weight(self) -> int:
        return sum(self.index) + (self.arg or 0)

    def cache_key(self) -> Tuple[str, str, str]:
        return self.tag.value, format_index(self.index), "" if self.arg is None else str(self.arg)

    def __str__(self) -> str:
        name = {
            ConstTag.MZV: "zeta", ConstTag.MTV: "T", ConstTag.XI: "xi",
            ConstTag.PSI: "psi", ConstTag.EZ_INT: "zeta", ConstTag.T_INT: "T",
        }[self.tag]
        inner = ",".join(str(x) for x in self.index)
        if self.arg is None:
            return f"{name}({inner})"
        return f"{name}({inner};{self.arg})"

    def sort_key(self) -> Tuple:
        return self.tag.value, self.index, self.arg or 0


def reversed_swap(word: str) -> str:
    """Reverse a word and exchange e0 <-> e1 (no membership check)."""
    swap = {E0: E1, E1: E0}
    return "".join(swap[letter] for letter in reversed(word))


class Evaluator:
    """
    Evaluates functions and constants as RealBalls at a requested precision.

    Instances are safe to share between threads; the memo is guarded by a
    lock and evaluation itself is pure.
    """

    def __init__(self,
                 precision: int = 128,
                 guard_bits: int = 32,
                 step_budget: int = 200000,
                 cache: Optional[ConstantCache] = None,
                 mzv_method: str = "holder",
                 z_cap: float = 0.95):
        """
        Initialize evaluator

        Args:
            precision: Default precision in bits
            guard_bits: Extra bits carried by the series kernels
            step_budget: Maximum series terms per evaluation
            cache: Optional persistent constant cache
            mzv_method: "holder" (split at 1/2) or "direct" (nested summation)
            z_cap: Largest argument accepted for direct Li/A series
        """
        if mzv_method not in ("holder", "direct"):
            raise DomainError(f"Unknown MZV method: {mzv_method}")
        self.precision = precision
        self.guard_bits = guard_bits
        self.step_budget = step_budget
        # fallback values stay out of the cache file
        self.cache = cache if mzv_method == "holder" else None
        self.mzv_method = mzv_method
        self.z_cap = Fraction(str(z_cap))
        self._memo: Dict[Hashable, RealBall] = {}
        self._lock = threading.Lock()

    def _prec(self, precision: Optional[int]) -> int:
        return precision or self.precision

    def _memoized(self, key: Hashable, compute) -> RealBall:
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = compute()
        with self._lock:
            self._memo[key] = value
        return value

    def clear_memo(self) -> None:
        with self._lock:
            self._memo.clear()

    def memoized_constants(self) -> List[ConstKind]:
        """Distinct named constants evaluated so far, at any precision."""
        with self._lock:
            kinds = {key[1] for key in self._memo if key[0] == "const"}
        return sorted(kinds, key=ConstKind.sort_key)

    # --- functions of z -------------------------------------------------

    def _check_cap(self, q: Fraction) -> None:
        if q > self.z_cap:
            raise PrecisionUnreachable(f"Argument {float(q):.6g} exceeds z_cap {float(self.z_cap)}")

    def li_eval(self, k: Sequence[int], z: Argument, precision: Optional[int] = None) -> RealBall:
        """Li(k;z) for 0 < z <= z_cap; Li(∅;z) = 1."""
        p = self._prec(precision)
        q = check_unit_interval(z)
        k = check_positive(k)
        if not k:
            return RealBall.exact(1, p)
        if all(x == 1 for x in k):
            return self.li_ones(len(k), q, p)
        self._check_cap(q)
        return self._memoized(
            ("li", k, q, p),
            lambda: li_series(k, q, p, self.guard_bits, self.step_budget),
        )

    def a_eval(self, k: Sequence[int], z: Argument, precision: Optional[int] = None) -> RealBall:
        """A(k;z) for 0 < z <= z_cap; A(∅;z) = 1."""
        p = self._prec(precision)
        q = check_unit_interval(z)
        k = check_positive(k)
        if not k:
            return RealBall.exact(1, p)
        if all(x == 1 for x in k):
            return self.a_ones(len(k), q, p)
        self._check_cap(q)
        return self._memoized(
            ("a", k, q, p),
            lambda: a_series(k, q, p, self.guard_bits, self.step_budget),
        )

    def li_ones(self, d: int, z: Argument, precision: Optional[int] = None) -> RealBall:
        """Li({1}^d; z) = (-log(1-z))^d / d!."""
        p = self._prec(precision)
        return self._memoized(("li1", d, check_unit_interval(z), p), lambda: li_ones(d, z, p))

    def a_ones(self, d: int, z: Argument, precision: Optional[int] = None) -> RealBall:
        """A({1}^d; z) = (2 artanh z)^d / d!."""
        p = self._prec(precision)
        return self._memoized(("a1", d, check_unit_interval(z), p), lambda: a_ones(d, z, p))

    def a_ones_frac(self, d: int, z: Argument, precision: Optional[int] = None) -> RealBall:
        """A({1}^d; (1-z)/(1+z)) = (-log z)^d / d!."""
        p = self._prec(precision)
        return self._memoized(("a1f", d, check_unit_interval(z), p), lambda: a_ones_frac(d, z, p))

    def log_z(self, z: Argument, precision: Optional[int] = None) -> RealBall:
        p = self._prec(precision)
        return self._memoized(("log", check_unit_interval(z), p), lambda: log_ball(z, p))

    # --- constants ------------------------------------------------------

    def const(self, kind: ConstKind, precision: Optional[int] = None) -> RealBall:
        """Evaluate a named constant, consulting the persistent cache first."""
        p = self._prec(precision)
        if kind.is_unit:
            return RealBall.exact(1, p)
        return self._memoized(("const", kind, p), lambda: self._const_cached(kind, p))

    def _const_cached(self, kind: ConstKind, p: int) -> RealBall:
        if self.cache is not None:
            stored = self.cache.get(kind, p)
            if stored is not None:
                logger.debug(f"cache hit {kind} at {p} bits")
                return stored
        value = self._compute_const(kind, p)
        if self.cache is not None:
            self.cache.put(kind, value)
        return value

    def _compute_const(self, kind: ConstKind, p: int) -> RealBall:
        tag = kind.tag
        if tag == ConstTag.MZV:
            if self.mzv_method == "direct":
                return mzv_direct(kind.index, p)
            return self._split_sum(kind.index, p, level=1)
        if tag == ConstTag.MTV:
            if len(kind.index) == 1:
                return t_empty(kind.index[0], self.mzv(kind.index, p), p)
            return self._split_sum(kind.index, p, level=2)
        if tag == ConstTag.EZ_INT:
            return self.mzv(kind.index + (kind.arg,), p)
        if tag == ConstTag.T_INT:
            return self.mtv(kind.index + (kind.arg,), p)
        level = 2 if tag == ConstTag.PSI else 1
        return self._xi_sum(kind.index, kind.arg, p, level)

    def _split_sum(self, k: Index, p: int, level: int) -> RealBall:
        word = index_to_word(k)
        inner = p + 8
        if level == 1:
            left_arg, right_arg, fn = HALF, HALF, self.li_eval
        else:
            left_arg, right_arg, fn = THIRD, HALF, self.a_eval
        terms = []
        for i in range(len(word) + 1):
            left = fn(word_to_index(word[:i]), left_arg, inner)
            right = fn(word_to_index(reversed_swap(word[i:])), right_arg, inner)
            terms.append(left * right)
        return ball_sum(terms, inner).with_prec(p)

    def _xi_sum(self, k: Index, m: int, p: int, level: int) -> RealBall:
        kd = dual(e_plus(k))
        value_of = self.mzv if level == 1 else self.mtv
        terms = []
        for j in compositions(m - 1, depth(kd)):
            terms.append(value_of(add(kd, j), p + 8) * binom_b(kd, j))
        return ball_sum(terms, p + 8).with_prec(p)

    def mzv(self, k: Sequence[int], precision: Optional[int] = None) -> RealBall:
        """zeta(k) for admissible k; zeta(∅) = 1."""
        return self.const(ConstKind(ConstTag.MZV, tuple(k)), precision)

    def mtv(self, k: Sequence[int], precision: Optional[int] = None) -> RealBall:
        """T(k) for admissible k; T(∅) = 1."""
        return self.const(ConstKind(ConstTag.MTV, tuple(k)), precision)

    def ez_zeta_int(self, k: Sequence[int], m: int, precision: Optional[int] = None) -> RealBall:
        """zeta(k;m) = zeta(k, m) for m >= 2."""
        return self.const(ConstKind(ConstTag.EZ_INT, tuple(k), m), precision)

    def t_fn_int(self, k: Sequence[int], m: int, precision: Optional[int] = None) -> RealBall:
        """T(k;m) = T(k, m) for m >= 2."""
        return self.const(ConstKind(ConstTag.T_INT, tuple(k), m), precision)

    def xi_int(self, k: Sequence[int], m: int, precision: Optional[int] = None) -> RealBall:
        """xi(k;m) = sum over j of b((k_+)†;j) zeta((k_+)† + j)."""
        return self.const(ConstKind(ConstTag.XI, tuple(k), m), precision)

    def psi_int(self, k: Sequence[int], m: int, precision: Optional[int] = None) -> RealBall:
        """psi(k;m) = sum over j of b((k_+)†;j) T((k_+)† + j)."""
        return self.const(ConstKind(ConstTag.PSI, tuple(k), m), precision)

    def zeta_word_sum(self, words: WordSum, precision: Optional[int] = None,
                      level: int = 1) -> RealBall:
        """
        zeta (or T at level 2) applied linearly to a combination of words in h0.
        """
        p = self._prec(precision)
        value_of = self.mzv if level == 1 else self.mtv
        terms = [value_of(word_to_index(word), p + 8) * coeff for word, coeff in words]
        return ball_sum(terms, p + 8).with_prec(p)


def t_empty(m: int, zeta_m: RealBall, precision: int) -> RealBall:
    """T(∅;m) = 2(1 - 2^-m) zeta(m)."""
    return (zeta_m * (Fraction(2) - Fraction(2, 2 ** m))).with_prec(precision)


def _rising(x: int, n: int) -> int:
    """(x)_n = x (x+1) ... (x+n-1)."""
    result = 1
    for i in range(n):
        result *= x + i
    return result


def _tail_order(n: int, target_bits: int) -> int:
    """Smallest order with order! / (2 pi n)^order below 2^-target_bits (Stirling estimate)."""
    order = 1
    while order * (math.log2(n) - max(0.0, math.log2(order / (2 * math.pi * math.e)))) < target_bits:
        order += 1
    return order


def _tail_sums(k: Index, n: int, order: int) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """
    Values and error bounds of the tails

        Z_n(k_i, ..., k_r) = sum over n < m_i < ... < m_r of prod m_j^-k_j

    for i = 1..r+1 (the last one empty, equal to 1), at the working precision.

    A tail is carried as a polynomial in 1/x plus a remainder of at most
    E * x^-order for every x >= n. One more summation applies the
    Euler-Maclaurin formula to each monomial,

        sum_{m > x} m^-u = x^(1-u)/(u-1) - x^-u/2
                           + sum_{i=1}^{q} B_2i/(2i)! (u)_(2i-1) x^(1-u-2i) + R_q,

    and m^-u is completely monotone, so |R_q| is at most the first omitted
    term. Monomials of degree >= order are folded into E.
    """
    x = mpmath.mpf(n)
    coeffs: Dict[int, mpmath.mpf] = {0: mpmath.mpf(1)}
    bound = mpmath.mpf(0)
    tails = [(mpmath.mpf(1), mpmath.mpf(0))]
    for t in reversed(k):
        expanded: Dict[int, mpmath.mpf] = {}

        def put(a: int, c: mpmath.mpf) -> None:
            expanded[a] = expanded.get(a, 0) + c

        # sum_{m > x} m^-t * E m^-order <= E x^(1-t-order) / (t+order-1)
        bound = bound * x ** (1 - t) / (t + order - 1)
        for a, c in coeffs.items():
            u = t + a
            put(u - 1, c / (u - 1))
            put(u, -c / 2)
            q = max(0, (order - u) // 2)
            for i in range(1, q + 1):
                put(u + 2 * i - 1,
                    c * mpmath.bernoulli(2 * i) * _rising(u, 2 * i - 1) / mpmath.factorial(2 * i))
            omitted = (abs(c * mpmath.bernoulli(2 * q + 2)) * _rising(u, 2 * q + 1)
                       / mpmath.factorial(2 * q + 2))
            bound += 2 * omitted * x ** (order - u - 2 * q - 1)
        coeffs = {}
        for a, c in expanded.items():
            if a >= order:
                bound += abs(c) * x ** (order - a)
            else:
                coeffs[a] = c
        terms = [c * x ** -a for a, c in coeffs.items()]
        value = mpmath.fsum(terms)
        magnitude = mpmath.fsum(abs(term) for term in terms)
        roundoff = mpmath.ldexp(mpmath.mpf(8 * order * len(k)), mpmath.mag(magnitude) - mpmath.mp.prec)
        tails.append((value, bound * x ** -order + roundoff))
    tails.reverse()
    return tails


def mzv_direct(k: Index, precision: int) -> RealBall:
    """
    zeta(k) by nested direct summation with Euler-Maclaurin tails.

    With n terms summed directly,

        zeta(k) = sum_{i=0}^{r} S_n(k_1, ..., k_i) * Z_n(k_{i+1}, ..., k_r)

    where S_n is the nested sum with every m_j <= n and Z_n the tail with
    every m_j > n. The tail order is chosen so that the first omitted
    Euler-Maclaurin terms, which grow like order!/(2 pi n)^order, stay below
    2^-(precision + 32).

    Raises:
        NotAdmissible: if k is not admissible
        PrecisionUnreachable: if the result misses the requested precision
    """
    if not is_admissible(k):
        raise NotAdmissible(f"{format_index(k)} is not admissible")
    if not k:
        return RealBall.exact(1, precision)
    r = len(k)
    n = max(DIRECT_MIN_TERMS, precision)
    target_bits = precision + 32
    order = _tail_order(n, target_bits) + 2 * r
    work = target_bits + 16
    with mpmath.workprec(work):
        # partial[j] is the nested sum over the first j entries with m_j <= m
        partial = [mpmath.mpf(1)] + [mpmath.mpf(0)] * r
        for m in range(1, n + 1):
            for j in range(r, 0, -1):
                partial[j] += partial[j - 1] / mpmath.mpf(m) ** k[j - 1]
        tails = _tail_sums(k, n, order)

    terms = []
    for i, (tail, tail_err) in enumerate(tails):
        head = partial[i]
        head_err = mpmath.ldexp(mpmath.mpf(4 * n * r), mpmath.mag(head) - work) if i else 0
        terms.append(RealBall.from_mpf(head, head_err, work) * RealBall.from_mpf(tail, tail_err, work))
    result = ball_sum(terms, work).with_prec(precision)
    if not result.meets_precision(precision):
        raise PrecisionUnreachable(
            f"direct zeta{format_index(k)} reached radius {result.rad_str()} at {precision} bits"
        )
    logger.debug(f"direct zeta{format_index(k)}: {n} terms, tail order {order}")
    return result


_default_lock = threading.Lock()
_default_evaluator: Optional[Evaluator] = None


def default_evaluator() -> Evaluator:
    """A shared Evaluator without a persistent cache."""
    global _default_evaluator
    with _default_lock:
        if _default_evaluator is None:
            _default_evaluator = Evaluator()
        return _default_evaluator
