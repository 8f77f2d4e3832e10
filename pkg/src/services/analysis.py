"""
Analytic sanity checks

* derivative_check compares a central finite difference of Li(k;z) or
  A(k;z) with the closed-form derivative.
* li_near_one / a_near_one evaluate Li(k;1-eps) and A(k;(1-eps)/(1+eps))
  through the functional equation at the small argument eps, which keeps
  every series far from its radius of convergence.
* limit_lemma_check samples the regularized combination near z = 1 and
  confirms that it settles on the predicted constant. The samples are
  z = 1 - 10^-j for j = 2..10, past the usual j <= 6, because with a = 3
  the convergence is still slower than 10^-3 at j = 6. The first samples
  (j = 2, 3) sum the series itself beyond z_cap, so the check does not
  rest only on the functional equation; deeper samples go through
  li_near_one / a_near_one.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import mpmath

from ..core.interfaces import DomainError, NotAdmissible
from .identities import thm_main2
from .index_core import check_positive, format_index, is_admissible, k_minus, ones
from .numerics import Evaluator, default_evaluator
from .realball import RealBall, ball_sum
from .series import Argument, a_series, check_unit_interval, level2_frac, li_series
from .verification import evaluate_expr

logger = logging.getLogger(__name__)

DERIVATIVE_STEP = Fraction(1, 2 ** 30)
DERIVATIVE_TOL = 1e-15
DERIVATIVE_PRECISION = 256
LIMIT_TOL = 1e-3
LIMIT_EXPONENTS = tuple(range(2, 11))
DIRECT_LIMIT_EXPONENTS = (2, 3)
DIRECT_LIMIT_PRECISION = 64


class FunctionKind(Enum):
    LI = "li"
    A = "a"


def _function(kind: FunctionKind, evaluator: Evaluator):
    return evaluator.li_eval if kind == FunctionKind.LI else evaluator.a_eval


def derivative_rhs(kind: FunctionKind, k: Sequence[int], z: Fraction, evaluator: Evaluator,
                   precision: int) -> RealBall:
    """
    d/dz of Li(k;z) or A(k;z):
        F(k_-;z)/z                       when k_r >= 2
        Li(k';z)/(1-z)                   when k_r = 1 (level 1)
        2 A(k';z)/(1-z^2)                when k_r = 1 (level 2)
    with k' = k minus its last entry.
    """
    fn = _function(kind, evaluator)
    if k[-1] >= 2:
        return fn(k_minus(k), z, precision) / RealBall.exact(z, precision)
    inner = fn(k[:-1], z, precision)
    if kind == FunctionKind.LI:
        return inner / RealBall.exact(1 - z, precision)
    return inner * Fraction(2) / RealBall.exact(1 - z * z, precision)


def derivative_check(kind: FunctionKind, k: Sequence[int], z: Argument,
                     precision: int = DERIVATIVE_PRECISION,
                     evaluator: Optional[Evaluator] = None,
                     tol: float = DERIVATIVE_TOL) -> bool:
    """
    Central difference (F(z+h) - F(z-h)) / 2h with h = 2^-30 against the
    closed-form derivative.

    Raises:
        DomainError: if k is empty or z +- h leaves (0, 1)
    """
    kind = FunctionKind(kind)
    k = check_positive(k)
    if not k:
        raise DomainError("derivative_check needs a non-empty index")
    q = check_unit_interval(z)
    h = DERIVATIVE_STEP
    check_unit_interval(q - h)
    check_unit_interval(q + h)
    evaluator = evaluator or default_evaluator()

    fn = _function(kind, evaluator)
    difference = (fn(k, q + h, precision) - fn(k, q - h, precision)) / RealBall.exact(2 * h, precision)
    expected = derivative_rhs(kind, k, q, evaluator, precision)
    deviation = abs(mpmath.fsub(difference.mid, expected.mid, exact=True))
    radius = mpmath.fadd(difference.rad, expected.rad, prec=64, rounding='u')
    passed = deviation <= mpmath.mpf(tol) + radius
    logger.debug(f"derivative {kind.value}{format_index(k)} at z={float(q)}: "
                 f"deviation {float(deviation):.2e}, radius {float(radius):.2e}")
    return bool(passed)


def li_near_one(k: Sequence[int], eps: Argument, precision: int = 128,
                evaluator: Optional[Evaluator] = None) -> RealBall:
    """Li(k; 1-eps), from the functional equation evaluated at eps."""
    evaluator = evaluator or default_evaluator()
    q = check_unit_interval(eps)
    _, rhs = thm_main2(k)
    return evaluate_expr(rhs, q, evaluator, precision)


def a_near_one(k: Sequence[int], eps: Argument, precision: int = 128,
               evaluator: Optional[Evaluator] = None) -> RealBall:
    """A(k; (1-eps)/(1+eps)), from the level-2 functional equation at eps."""
    evaluator = evaluator or default_evaluator()
    q = check_unit_interval(eps)
    _, rhs = thm_main2(k, level=2)
    return evaluate_expr(rhs, q, evaluator, precision)


def series_near_one(k: Sequence[int], eps: Argument, level: int = 1,
                    precision: int = DIRECT_LIMIT_PRECISION,
                    evaluator: Optional[Evaluator] = None) -> RealBall:
    """
    Li(k; 1-eps) or, at level 2, A(k; (1-eps)/(1+eps)) by summing the
    series itself. z_cap does not apply; the step budget does.

    Raises:
        PrecisionUnreachable: if eps is too small for the step budget
    """
    evaluator = evaluator or default_evaluator()
    q = check_unit_interval(eps)
    if level == 1:
        return li_series(k, 1 - q, precision, evaluator.guard_bits, evaluator.step_budget)
    return a_series(k, level2_frac(q), precision, evaluator.guard_bits, evaluator.step_budget)


@dataclass
class LimitReport:
    """Deviations of the regularized combination from its limit"""
    l: tuple
    a: int
    level: int
    target: RealBall
    exponents: List[int] = field(default_factory=list)
    deviations: List[float] = field(default_factory=list)
    routes: List[str] = field(default_factory=list)
    tol: float = LIMIT_TOL

    @property
    def passed(self) -> bool:
        if not self.deviations or self.deviations[-1] > self.tol:
            return False
        last = self.deviations[-3:]
        return all(x >= y for x, y in zip(last, last[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'l': format_index(self.l),
            'a': self.a,
            'level': self.level,
            'target': self.target.to_dict(),
            'samples': [{'z': f"1-1e-{j}", 'dev': f"{d:.2e}", 'route': route}
                        for j, d, route in zip(self.exponents, self.deviations, self.routes)],
            'pass': self.passed,
        }


def limit_lemma_report(l: Sequence[int], a: int, level: int = 1, precision: int = 128,
                       evaluator: Optional[Evaluator] = None,
                       exponents: Sequence[int] = LIMIT_EXPONENTS,
                       tol: float = LIMIT_TOL) -> LimitReport:
    """
    Sample
        F(l,{1}^a; z) - sum_{d=1}^a (-1)^(a-d) X(l_-; a-d+1) F({1}^d; z)
    at z = 1 - 10^-j (z = (1-eps)/(1+eps) at level 2), where F, X are Li, xi
    at level 1 and A, psi at level 2. The limit is (-1)^a X(l_-; a+1).

    Raises:
        NotAdmissible: if l is empty or not admissible
        DomainError: if a < 0 or the level is unknown
    """
    l = check_positive(l)
    if not l or not is_admissible(l):
        raise NotAdmissible(f"limit check needs a non-empty admissible index, got {format_index(l)}")
    if a < 0:
        raise DomainError(f"a must be >= 0, got {a}")
    if level not in (1, 2):
        raise DomainError(f"Unknown level {level}")
    evaluator = evaluator or default_evaluator()
    inner = precision + 16

    if level == 1:
        constant, near_one = evaluator.xi_int, li_near_one
    else:
        constant, near_one = evaluator.psi_int, a_near_one
    base = k_minus(l)
    target = constant(base, a + 1, inner) * (-1) ** a
    coefficients = [constant(base, a - d + 1, inner) * (-1) ** (a - d) for d in range(1, a + 1)]

    report = LimitReport(l, a, level, target.with_prec(precision), tol=tol)
    for j in exponents:
        eps = Fraction(1, 10 ** j)
        if j in DIRECT_LIMIT_EXPONENTS:
            value = series_near_one(l + ones(a), eps, level, DIRECT_LIMIT_PRECISION, evaluator)
            route = "series"
        else:
            value = near_one(l + ones(a), eps, inner, evaluator)
            route = "functional equation"
        corrections = []
        for d, coeff in enumerate(coefficients, start=1):
            ones_value = (evaluator.li_ones(d, 1 - eps, inner) if level == 1
                          else evaluator.a_ones_frac(d, eps, inner))
            corrections.append(coeff * ones_value)
        combination = value - ball_sum(corrections, inner)
        deviation = float(abs(combination.mid - target.mid))
        report.exponents.append(j)
        report.deviations.append(deviation)
        report.routes.append(route)
        logger.debug(f"limit {format_index(l)}, a={a}, level {level}: j={j} ({route}) deviation {deviation:.2e}")
    return report


def limit_lemma_check(l: Sequence[int], a: int, precision: int = 128, level: int = 1,
                      evaluator: Optional[Evaluator] = None) -> bool:
    """True iff the regularized combination converges to its predicted limit."""
    return limit_lemma_report(l, a, level, precision, evaluator).passed
