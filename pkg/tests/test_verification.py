from fractions import Fraction

import mpmath
import pytest

from src.core.interfaces import DomainError
from src.services.identities import Expr, FunFactor, FunKind
from src.services.numerics import Evaluator
from src.services.realball import RealBall
from src.services.verification import IDENTITIES, check_z_grid, evaluate_expr, get_identity, verify

with mpmath.workprec(300):
    PI4_OVER_36 = mpmath.pi ** 4 / 36


def test_registry():
    assert "thm-main2" in IDENTITIES
    assert get_identity("cor-main-lv2").level == 2
    with pytest.raises(DomainError, match="Unknown identity"):
        get_identity("no-such-identity")


def test_missing_parameters(evaluator):
    with pytest.raises(DomainError, match="needs parameter"):
        verify("thm-main1", {"k": (1,)}, evaluator=evaluator)


def test_z_grid():
    assert check_z_grid([0.5, "1/3"]) == [Fraction(1, 2), Fraction(1, 3)]
    with pytest.raises(DomainError):
        check_z_grid([0.99])
    with pytest.raises(DomainError):
        check_z_grid([])


def test_functional_equation_passes(evaluator):
    report = verify("thm-main2", {"k": (1, 2)}, evaluator=evaluator)
    assert report.passed, report.summary()
    assert len(report.points) == 5
    assert report.tol == 1e-20
    assert report.to_dict()['pass'] is True


def test_perturbation_is_detected(evaluator):
    report = verify("thm-main2", {"k": (1, 2)}, evaluator=evaluator, perturb=Fraction(1, 10 ** 10))
    assert not report.passed
    assert report.max_dev > 1e-11
    assert report.summary().startswith("FAIL")


def test_xi_duality_value(evaluator):
    report = verify("cor-main", {"k": (2,), "m": 1}, evaluator=evaluator)
    assert report.passed, report.summary()
    assert report.points[0].z is None
    assert report.points[0].lhs.contains(PI4_OVER_36)


@pytest.mark.parametrize("name, params", [
    ("thm-main1", {"k": (1,), "m": 1}),
    ("thm-main1", {"k": (2, 1), "m": 2}),
    ("cor-main", {"k": (1, 2), "m": 2}),
    ("ak-dep1", {"kk": 3}),
    ("xu-2-8", {"a": 2, "b": 1}),
    ("ak-thm8", {"a": 2, "b": 1, "m": 2}),
    ("ak-thm9-2", {"a": 2, "b": 1, "m": 2}),
])
def test_identities_pass(evaluator, name, params):
    report = verify(name, params, evaluator=evaluator)
    assert report.passed, report.summary()


def test_level2_uses_wider_tolerance(evaluator):
    report = verify("thm-main2-lv2", {"k": (2,)}, evaluator=evaluator, zs=[0.3, 0.5])
    assert report.tol == 1e-10
    assert report.passed, report.summary()


def test_poset_route(evaluator):
    report = verify("thm-main1", {"k": (1, 2), "m": 2}, evaluator=evaluator, const_route="poset")
    assert report.passed, report.summary()


def test_bad_route_and_tolerance(evaluator):
    with pytest.raises(DomainError):
        verify("thm-main2", {"k": (2,)}, evaluator=evaluator, const_route="quadrature")
    with pytest.raises(DomainError):
        verify("thm-main2", {"k": (2,)}, evaluator=evaluator, tol=0)


def test_z_outside_grid_range(evaluator):
    with pytest.raises(DomainError):
        verify("thm-main2", {"k": (2,)}, zs=[0.99], evaluator=evaluator)


def test_reading_is_chosen_automatically(evaluator):
    report = verify("xu-thm3-3", {"a": 1, "m": 1, "ks": (2,)}, evaluator=evaluator)
    assert report.passed
    assert report.reading == "printed"
    report = verify("xu-thm3-3", {"a": 1, "m": 1, "ks": (2, 3)}, evaluator=evaluator)
    assert report.passed, report.summary()
    assert report.to_dict()['reading'] == report.reading


def test_evaluation_failure_is_reported():
    starved = Evaluator(step_budget=5)
    report = verify("thm-main2", {"k": (1, 2)}, evaluator=starved)
    assert not report.passed
    assert report.error.startswith("PrecisionUnreachable")
    assert "error" in report.to_dict()


def test_function_factor_needs_sample_point(evaluator):
    expr = Expr.fun(FunFactor(FunKind.LI, (2,)))
    with pytest.raises(DomainError):
        evaluate_expr(expr, None, evaluator, 128)


class LooseEvaluator(Evaluator):
    """Widens every named constant to a radius of 1e-5."""

    def const(self, kind, precision=None):
        value = super().const(kind, precision)
        return RealBall(value.mid, mpmath.mpf("1e-5"), value.prec)


def test_loose_constants_fail_verification():
    report = verify("cor-main", {"k": (2,), "m": 1}, evaluator=LooseEvaluator())
    assert not report.passed
    assert report.error.startswith("PrecisionUnreachable")
    assert "bit bound" in report.error


def test_direct_method_detects_perturbation():
    direct = Evaluator(mzv_method="direct")
    assert verify("cor-main", {"k": (2,), "m": 1}, tol=1e-25, evaluator=direct).passed
    perturbed = verify("cor-main", {"k": (2,), "m": 1}, tol=1e-25, evaluator=direct,
                       perturb=Fraction(1, 10 ** 8))
    assert not perturbed.passed
    assert perturbed.error is None
