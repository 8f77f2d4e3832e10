"""
Independent validation oracles

Low-precision enclosures computed by brute force, used to check the fast
evaluation paths:

* direct nested summation in numpy float64 with a rigorous tail bound
  and a generous roundoff allowance, for zeta, T, Li and A;
* Richardson-extrapolated partial sums for multiple T-values;
* the pre-flight self-check that compares Evaluator.mzv / Evaluator.mtv
  against the direct oracle for every admissible index up to a weight.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import numpy as np

from ..core.interfaces import DomainError, NotAdmissible, StatusCallback
from .index_core import admissible_indices, format_index, is_admissible
from .numerics import Evaluator
from .realball import RealBall
from .series import Argument, check_unit_interval, log2_tail_bound

logger = logging.getLogger(__name__)

ZETA_TERMS = 10 ** 6
SERIES_TERMS = 2000
EPS = np.finfo(np.float64).eps


def _nested_terms(k: Sequence[int], n: int, parity: bool) -> np.ndarray:
    """
    Outer summands m -> S_{r-1}(m) / m^{k_r} for m = 1..n, where S_j(m) is
    the nested sum over the first j levels with m_j < m.
    """
    m = np.arange(1, n + 1, dtype=np.float64)
    inner = np.ones(n)
    for level, kj in enumerate(k[:-1], start=1):
        step = inner / m ** kj
        if parity:
            step = np.where(np.arange(1, n + 1) % 2 == level % 2, step, 0.0)
        # exclusive cumulative sum: strictly smaller indices only
        inner = np.concatenate(([0.0], np.cumsum(step)[:-1]))
    last = inner / m ** k[-1]
    if parity:
        last = np.where(np.arange(1, n + 1) % 2 == len(k) % 2, last, 0.0)
    return last


def _interval(total: float, low_extra: float, high_extra: float) -> RealBall:
    low = total - low_extra
    high = total + high_extra
    return RealBall.from_mpf((mpmath.mpf(low) + mpmath.mpf(high)) / 2,
                             (mpmath.mpf(high) - mpmath.mpf(low)) / 2, prec=64)


def harmonic_tail(s: int, j: int, n: int) -> float:
    """
    Upper bound for sum_{m > n} (1 + log m)^j / (j! m^s), which dominates
    the outer tail of a depth j+1 nested sum with last entry s.
    """
    a = mpmath.mpf(s - 1)
    x = a * (1 + mpmath.log(n))
    value = mpmath.e ** a * mpmath.gammainc(j + 1, x) / (a ** (j + 1) * mpmath.factorial(j))
    return float(value) * (1 + 1e-12)


def zeta_oracle(k: Sequence[int], terms: int = ZETA_TERMS, level: int = 1) -> RealBall:
    """
    Enclosure of zeta(k) (level 1) or T(k) (level 2) by direct summation.

    Raises:
        NotAdmissible: if k is not admissible
    """
    k = tuple(k)
    if not is_admissible(k):
        raise NotAdmissible(f"{format_index(k)} is not admissible")
    if not k:
        return RealBall.exact(1, 64)
    parity = level == 2
    scale = 2.0 ** len(k) if parity else 1.0
    summands = _nested_terms(k, terms, parity)
    total = float(np.sum(summands)) * scale
    tail = harmonic_tail(k[-1], len(k) - 1, terms) * scale
    roundoff = 4 * terms * len(k) * EPS * abs(total)
    return _interval(total, roundoff, tail + roundoff)


def series_oracle(k: Sequence[int], z: Argument, terms: int = SERIES_TERMS,
                  level: int = 1) -> RealBall:
    """
    Enclosure of Li(k;z) (level 1) or A(k;z) (level 2) by direct summation.

    Raises:
        DomainError: unless 0 < z <= 0.9
    """
    q = check_unit_interval(z)
    if q > Fraction(9, 10):
        raise DomainError(f"Series oracle needs z <= 0.9, got {float(q)}")
    k = tuple(k)
    if not k:
        return RealBall.exact(1, 64)
    parity = level == 2
    scale = 2.0 ** len(k) if parity else 1.0
    powers = float(q) ** np.arange(1, terms + 1, dtype=np.float64)
    total = float(np.sum(_nested_terms(k, terms, parity) * powers)) * scale
    tail = 2.0 ** (math.ceil(log2_tail_bound(terms, q, len(k))) + 2) * scale
    roundoff = 4 * terms * (len(k) + 1) * EPS * abs(total)
    return _interval(total, roundoff, tail + roundoff)


def mtv_richardson(k: Sequence[int], precision: int = 128, base: int = 64,
                   levels: int = 7) -> RealBall:
    """
    T(k) from partial sums at N = base * 2^i, extrapolated against the
    tail model c1/N^(s-1) + c2/N^s + ... with s the last entry.

    The radius is four times the last successive difference of the
    diagonal, an empirical bound. Valid when every entry is >= 2.
    """
    k = tuple(k)
    if not k or any(x < 2 for x in k):
        raise DomainError(f"Richardson MTV needs entries >= 2, got {format_index(k)}")
    if base % 2:
        raise DomainError("Richardson base must be even")
    r = len(k)
    s = k[-1]
    checkpoints = [base * 2 ** i for i in range(levels)]
    partials: List[mpmath.mpf] = []
    with mpmath.workprec(precision):
        inner = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (r - 1)
        total = mpmath.mpf(0)
        upto = 0
        for stop in checkpoints:
            for m in range(upto + 1, stop + 1):
                if (m - r) % 2 == 0:
                    total += inner[r - 1] / mpmath.mpf(m) ** s
                for j in range(r - 1, 0, -1):
                    if (m - j) % 2 == 0:
                        inner[j] += inner[j - 1] / mpmath.mpf(m) ** k[j - 1]
            upto = stop
            partials.append(total * 2 ** r)

        table = [[value] for value in partials]
        for i in range(1, levels):
            for j in range(1, i + 1):
                factor = mpmath.mpf(2) ** (s - 2 + j)
                table[i].append((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1))
        best = table[-1][-1]
        previous = table[-2][-2]
        radius = 4 * abs(best - previous)
    logger.debug(f"Richardson T{format_index(k)}: radius {mpmath.nstr(radius, 3)}")
    return RealBall.from_mpf(best, radius, precision)


@dataclass
class PreflightReport:
    """Outcome of the split-at-1/2 self-check"""
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    max_weight: int = 5

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            'checked': self.checked,
            'failures': self.failures,
            'max_weight': self.max_weight,
            'pass': self.passed,
        }


def run_preflight(evaluator: Evaluator, max_weight: int = 5, include_mtv: bool = True,
                  terms: int = ZETA_TERMS,
                  status_callback: Optional[StatusCallback] = None) -> PreflightReport:
    """
    Compare mzv (and mtv) with the direct oracle for every admissible
    index of weight <= max_weight.
    """
    report = PreflightReport(max_weight=max_weight)
    for w in range(2, max_weight + 1):
        for k in admissible_indices(w):
            for level in ((1, 2) if include_mtv else (1,)):
                value = evaluator.mzv(k) if level == 1 else evaluator.mtv(k)
                oracle = zeta_oracle(k, terms, level)
                report.checked += 1
                if not value.overlaps(oracle):
                    name = "zeta" if level == 1 else "T"
                    message = f"{name}{format_index(k)}: {value} outside oracle {oracle}"
                    logger.error(f"Pre-flight failure for {format_index(k)}: {message}")
                    report.failures.append(message)
        if status_callback:
            status_callback(f"pre-flight weight {w} done")
    logger.info(f"Pre-flight checked {report.checked} values, {len(report.failures)} failures")
    return report
