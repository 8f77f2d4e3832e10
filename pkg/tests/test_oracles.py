from fractions import Fraction

import mpmath
import pytest

from src.core.interfaces import DomainError, NotAdmissible
from src.services.oracles import harmonic_tail, mtv_richardson, run_preflight, series_oracle, zeta_oracle

with mpmath.workprec(200):
    ZETA2 = mpmath.pi ** 2 / 6
    T2 = mpmath.pi ** 2 / 4


def test_zeta_oracle_encloses_known_values():
    assert zeta_oracle((2,), 10 ** 5).contains(ZETA2)
    assert zeta_oracle((2,), 10 ** 5, level=2).contains(T2)
    assert zeta_oracle(()).contains(1)


def test_zeta_oracle_is_tight_enough():
    assert zeta_oracle((2,), 10 ** 6).rad < 1e-5


def test_zeta_oracle_needs_admissible_index():
    with pytest.raises(NotAdmissible):
        zeta_oracle((2, 1))


@pytest.mark.parametrize("k", [(1, 2), (2, 2), (1, 1, 3)])
def test_fast_values_lie_inside_oracle(evaluator, k):
    assert evaluator.mzv(k).overlaps(zeta_oracle(k, 10 ** 5))
    assert evaluator.mtv(k).overlaps(zeta_oracle(k, 10 ** 5, level=2))


@pytest.mark.parametrize("k", [(2,), (1, 2), (2, 1, 1)])
def test_series_oracle(evaluator, k):
    z = Fraction(1, 2)
    assert evaluator.li_eval(k, z).overlaps(series_oracle(k, z))
    assert evaluator.a_eval(k, z).overlaps(series_oracle(k, z, level=2))


def test_series_oracle_range():
    with pytest.raises(DomainError):
        series_oracle((2,), 0.95)


def test_harmonic_tail_dominates_depth_one_tail():
    with mpmath.workprec(100):
        exact_tail = mpmath.zeta(2, 1001)
    assert harmonic_tail(2, 0, 1000) >= exact_tail


def test_richardson_mtv(evaluator):
    for k in [(2, 2), (2, 3), (3, 2)]:
        assert evaluator.mtv(k).overlaps(mtv_richardson(k))


def test_richardson_needs_entries_of_at_least_two():
    with pytest.raises(DomainError):
        mtv_richardson((1, 2))
    with pytest.raises(DomainError):
        mtv_richardson((2, 2), base=63)


def test_preflight_passes(evaluator):
    report = run_preflight(evaluator, max_weight=3, terms=10 ** 5)
    assert report.passed
    assert report.checked == 6
    assert report.to_dict()['pass'] is True


def test_preflight_level_one_only(evaluator):
    messages = []
    report = run_preflight(evaluator, max_weight=3, include_mtv=False, terms=10 ** 5,
                           status_callback=messages.append)
    assert report.checked == 3
    assert messages == ["pre-flight weight 2 done", "pre-flight weight 3 done"]
