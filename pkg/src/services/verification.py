"""
Identity verification

Evaluates both sides of a built identity as RealBalls and compares them
point by point. A verification passes when every deviation
|lhs.mid - rhs.mid| is at most the tolerance plus the combined radii.
Each side must also carry a radius of at most 2^(1-p) * max(1, |mid|)
at the requested precision p; a looser side fails the point.

Evaluation problems (an unreachable precision, an argument outside the
series domain) never escape verify(); they produce a failed report with
the diagnostic in its `error` field. Parameter problems are usage errors
and are raised before any evaluation starts.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import mpmath

from ..core.interfaces import AKZetaError, DomainError, NotAdmissible, PrecisionUnreachable
from .identities import (
    ArgTag, Expr, FunFactor, FunKind, Identity, Reading, ak_dep1, ak_thm8, ak_thm9_2,
    cor_main, cor_main_lv2, thm_main1, thm_main1_lv2, thm_main2, thm_main2_lv2,
    xu_2_8, xu_thm3_3
)
from .index_core import format_index
from .numerics import ConstKind, ConstTag, Evaluator, default_evaluator
from .poset_algebra import i_one, i_one_level2, xi_poset
from .realball import RealBall, ball_sum
from .series import Argument, level2_frac, one_minus, to_fraction

logger = logging.getLogger(__name__)

DEFAULT_Z_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
Z_MIN = Fraction(1, 20)
Z_MAX = Fraction(19, 20)
TOLERANCE_LEVEL1 = 1e-20
TOLERANCE_LEVEL2 = 1e-10
CONST_ROUTES = ("expansion", "poset")


@dataclass(frozen=True)
class IdentitySpec:
    """A named identity builder and the parameters it takes"""
    name: str
    builder: Callable[..., Identity]
    params: Tuple[str, ...]
    functional: bool
    level: int = 1

    def build(self, params: Dict[str, Any]) -> Identity:
        missing = [p for p in self.params if p not in params]
        if missing:
            raise DomainError(f"{self.name} needs parameter(s): {', '.join(missing)}")
        return self.builder(*(params[p] for p in self.params))


IDENTITIES: Dict[str, IdentitySpec] = {
    spec.name: spec for spec in (
        IdentitySpec("thm-main2", thm_main2, ("k",), True),
        IdentitySpec("thm-main1", thm_main1, ("k", "m"), False),
        IdentitySpec("cor-main", cor_main, ("k", "m"), False),
        IdentitySpec("thm-main2-lv2", thm_main2_lv2, ("k",), True, 2),
        IdentitySpec("thm-main1-lv2", thm_main1_lv2, ("k", "m"), False, 2),
        IdentitySpec("cor-main-lv2", cor_main_lv2, ("k", "m"), False, 2),
        IdentitySpec("ak-thm8", ak_thm8, ("a", "b", "m"), False),
        IdentitySpec("ak-thm9-2", ak_thm9_2, ("a", "b", "m"), False),
        IdentitySpec("ak-dep1", ak_dep1, ("kk",), True),
        IdentitySpec("xu-2-8", xu_2_8, ("a", "b"), True),
        IdentitySpec("xu-thm3-3", xu_thm3_3, ("a", "m", "ks", "reading"), False),
    )
}


def get_identity(name: str) -> IdentitySpec:
    try:
        return IDENTITIES[name]
    except KeyError:
        known = ", ".join(sorted(IDENTITIES))
        raise DomainError(f"Unknown identity '{name}' (known: {known})") from None


def check_z_grid(zs: Sequence[Argument]) -> List[Fraction]:
    """
    Exact sample points, each within [0.05, 0.95].

    Raises:
        DomainError: if a point is outside the range or the grid is empty
    """
    points = [to_fraction(z) for z in zs]
    if not points:
        raise DomainError("The z-grid is empty")
    for z in points:
        if not Z_MIN <= z <= Z_MAX:
            raise DomainError(f"z={float(z)} is outside [0.05, 0.95]")
    return points


# --- evaluation --------------------------------------------------------------------

def evaluate_const(kind: ConstKind, evaluator: Evaluator, precision: int,
                   const_route: str = "expansion") -> RealBall:
    """A named constant; with const_route="poset" xi and psi go through 2-poset integrals."""
    if const_route == "poset" and kind.tag == ConstTag.XI:
        return i_one(xi_poset(kind.index, kind.arg), precision, evaluator)
    if const_route == "poset" and kind.tag == ConstTag.PSI:
        return i_one_level2(xi_poset(kind.index, kind.arg), precision, evaluator)
    return evaluator.const(kind, precision)


def evaluate_fun(factor: FunFactor, z: Fraction, evaluator: Evaluator,
                 precision: int) -> RealBall:
    if factor.kind == FunKind.LOG:
        return evaluator.log_z(z, precision)
    if factor.kind == FunKind.LI:
        argument = z if factor.arg == ArgTag.Z else one_minus(z)
        return evaluator.li_eval(factor.index, argument, precision)
    if factor.arg == ArgTag.LEVEL2_FRAC:
        if all(x == 1 for x in factor.index):
            return evaluator.a_ones_frac(len(factor.index), z, precision)
        return evaluator.a_eval(factor.index, level2_frac(z), precision)
    return evaluator.a_eval(factor.index, z, precision)


def evaluate_expr(expr: Expr, z: Optional[Fraction], evaluator: Evaluator, precision: int,
                  const_route: str = "expansion") -> RealBall:
    """
    Evaluate an expression at one sample point.

    Args:
        expr: Expression to evaluate
        z: Sample point, or None for an expression of constants only
        evaluator: Evaluator used for every factor
        precision: Working precision in bits
        const_route: "expansion" or "poset" (how xi/psi constants are computed)

    Raises:
        DomainError: if a function factor appears and z is None
    """
    inner = precision + 16
    values = []
    for term in expr:
        value = RealBall.exact(term.coeff, inner)
        for kind in term.consts:
            if not kind.is_unit:
                value = value * evaluate_const(kind, evaluator, inner, const_route)
        for factor in term.funs:
            if factor.is_unit:
                continue
            if z is None:
                raise DomainError(f"{factor} needs a sample point")
            value = value * evaluate_fun(factor, z, evaluator, inner)
        if term.binom is not None:
            value = value * comb(*term.binom)
        values.append(value)
    return ball_sum(values, inner).with_prec(precision)


# --- reports -------------------------------------------------------------------------

@dataclass
class PointResult:
    """LHS and RHS at one sample point"""
    z: Optional[Fraction]
    lhs: RealBall
    rhs: RealBall

    @property
    def deviation(self) -> mpmath.mpf:
        return abs(mpmath.fsub(self.lhs.mid, self.rhs.mid, exact=True))

    @property
    def radius(self) -> mpmath.mpf:
        return mpmath.fadd(self.lhs.rad, self.rhs.rad, prec=64, rounding='u')

    def within(self, tol: float) -> bool:
        return self.deviation <= mpmath.mpf(tol) + self.radius

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        if self.z is not None:
            result['z'] = float(self.z)
        result.update({
            'lhs': self.lhs.to_dict(),
            'rhs': self.rhs.to_dict(),
            'dev': f"{float(self.deviation):.2e}",
            'rad': f"{float(self.radius):.2e}",
        })
        return result


def _param_text(value: Any) -> Any:
    if isinstance(value, tuple):
        return format_index(value)
    if isinstance(value, Reading):
        return value.value
    return value


@dataclass
class VerificationReport:
    """Outcome of one verification"""
    identity: str
    params: Dict[str, Any]
    tol: float
    points: List[PointResult] = field(default_factory=list)
    ms: float = 0.0
    reading: Optional[str] = None
    error: Optional[str] = None

    @property
    def max_dev(self) -> float:
        return max((float(p.deviation) for p in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.points) and all(p.within(self.tol) for p in self.points)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'identity': self.identity,
            'params': {k: _param_text(v) for k, v in self.params.items()},
            'points': [p.to_dict() for p in self.points],
            'max_dev': f"{self.max_dev:.2e}",
            'tol': self.tol,
            'pass': self.passed,
            'ms': round(self.ms, 1),
        }
        if self.reading is not None:
            result['reading'] = self.reading
        if self.error is not None:
            result['error'] = self.error
        return result

    def label(self) -> str:
        params = ", ".join(f"{k}={_param_text(v)}" for k, v in self.params.items())
        return f"{self.identity}({params})"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status}  {self.label()}  max dev {self.max_dev:.2e}  tol {self.tol:.0e}"
        if self.reading:
            line += f"  reading={self.reading}"
        if self.error:
            line += f"  error: {self.error}"
        return line


# --- verify --------------------------------------------------------------------------

def _evaluate_identity(identity: Identity, zs: Sequence[Optional[Fraction]], evaluator: Evaluator,
                       precision: int, const_route: str,
                       perturb: Optional[Fraction]) -> List[PointResult]:
    lhs, rhs = identity
    points = []
    for z in zs:
        left = evaluate_expr(lhs, z, evaluator, precision, const_route)
        right = evaluate_expr(rhs, z, evaluator, precision, const_route)
        for side, value in (("lhs", left), ("rhs", right)):
            if not value.meets_precision(precision):
                raise PrecisionUnreachable(
                    f"{side} radius {value.rad_str()} exceeds the {precision}-bit bound"
                )
        if perturb:
            right = right + perturb
        points.append(PointResult(z, left, right))
    return points


def _run(spec: IdentitySpec, params: Dict[str, Any], zs: Sequence[Optional[Fraction]],
         tol: float, evaluator: Evaluator, precision: int, const_route: str,
         perturb: Optional[Fraction]) -> VerificationReport:
    report = VerificationReport(spec.name, dict(params), tol)
    identity = spec.build(params)
    try:
        report.points = _evaluate_identity(identity, zs, evaluator, precision, const_route, perturb)
    except AKZetaError as e:
        logger.debug(f"{spec.name} evaluation failed: {e}")
        report.error = f"{type(e).__name__}: {e}"
    return report


def verify(name: str, params: Dict[str, Any], zs: Optional[Sequence[Argument]] = None,
           tol: Optional[float] = None, precision: int = 128,
           evaluator: Optional[Evaluator] = None, const_route: str = "expansion",
           perturb: Optional[Fraction] = None) -> VerificationReport:
    """
    Verify one identity.

    Args:
        name: Registered identity name, e.g. "thm-main2"
        params: Builder parameters (k, m, a, b, kk, ks)
        zs: Sample points for functional identities; ignored otherwise
        tol: Tolerance; defaults to 1e-20 at level 1 and 1e-10 at level 2
        precision: Working precision in bits
        evaluator: Evaluator to use (the shared default when omitted)
        const_route: "expansion" or "poset"
        perturb: Amount added to every right-hand side value

    Returns:
        VerificationReport

    Raises:
        DomainError: unknown identity, bad parameters or a z outside [0.05, 0.95]
    """
    spec = get_identity(name)
    if const_route not in CONST_ROUTES:
        raise DomainError(f"Unknown constant route: {const_route}")
    evaluator = evaluator or default_evaluator()
    if tol is None:
        tol = TOLERANCE_LEVEL1 if spec.level == 1 else TOLERANCE_LEVEL2
    if tol <= 0:
        raise DomainError("Tolerance must be positive")
    points: Sequence[Optional[Fraction]]
    if spec.functional:
        points = check_z_grid(zs if zs is not None else DEFAULT_Z_GRID)
    else:
        points = [None]

    started = time.perf_counter()
    if spec.name == "xu-thm3-3" and "reading" not in params:
        report = _verify_readings(spec, params, points, tol, evaluator, precision,
                                  const_route, perturb)
    else:
        report = _run(spec, params, points, tol, evaluator, precision, const_route, perturb)
    report.ms = (time.perf_counter() - started) * 1000
    logger.debug(report.summary())
    return report


def _verify_readings(spec: IdentitySpec, params: Dict[str, Any], points, tol: float,
                     evaluator: Evaluator, precision: int, const_route: str,
                     perturb: Optional[Fraction]) -> VerificationReport:
    """Try each reading in order and keep the first that passes."""
    failures = []
    report = None
    for reading in Reading:
        attempt = dict(params, reading=reading)
        try:
            report = _run(spec, attempt, points, tol, evaluator, precision, const_route, perturb)
        except NotAdmissible as e:
            report = VerificationReport(spec.name, attempt, tol, error=f"NotAdmissible: {e}")
        report.reading = reading.value
        if report.passed:
            return report
        failures.append(reading.value)
        logger.warning(f"{spec.name} reading '{reading.value}' failed for "
                       f"a={params.get('a')}, m={params.get('m')}, ks={params.get('ks')}; trying next")
    report.error = report.error or f"no reading passed (tried {', '.join(failures)})"
    return report

