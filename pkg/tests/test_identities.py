from fractions import Fraction

import pytest

from src.core.interfaces import DomainError, EmptyIndex
from src.services.identities import (
    ArgTag, Expr, FunFactor, FunKind, Reading, Term, ak_dep1, ak_thm8, ak_thm9_2, check_weights,
    cor_main, thm_main1, thm_main2, xu_2_8, xu_2_8_symbolic_check, xu_thm3_3
)
from src.services.index_core import positive_indices
from src.services.numerics import ConstKind, ConstTag

Z = ArgTag.Z
MIRROR = ArgTag.ONE_MINUS_Z


def li(k, arg=Z):
    return FunFactor(FunKind.LI, k, arg)


def test_fun_factor_text():
    assert str(li((1, 2), MIRROR)) == "Li(1,2;1-z)"
    assert str(FunFactor(FunKind.A, (2,), ArgTag.LEVEL2_FRAC)) == "A(2;(1-z)/(1+z))"
    assert str(FunFactor(FunKind.LOG)) == "log(z)"
    assert li((2, 1)).weight == 3


def test_fun_factor_validation():
    with pytest.raises(DomainError):
        FunFactor(FunKind.LI, (2,), ArgTag.LEVEL2_FRAC)
    with pytest.raises(DomainError):
        FunFactor(FunKind.LOG, (1,))


def test_canonicalize_merges_and_drops_units():
    zeta2 = ConstKind(ConstTag.MZV, (2,))
    unit = ConstKind(ConstTag.MZV, ())
    expr = Expr.of(
        Term(Fraction(1), (zeta2,), (li(()),)),
        Term(Fraction(2), (zeta2, unit)),
        Term(Fraction(5), (), (li((1,)),)),
        Term(Fraction(-5), (), (li((1,)),)),
    )
    canonical = expr.canonicalize()
    assert len(canonical) == 1
    assert canonical.terms[0].coeff == 3
    assert canonical.terms[0].consts == (zeta2,)
    assert canonical.terms[0].funs == ()


def test_empty_expression_text():
    assert str(Expr()) == "0"
    assert str(Expr.const(ConstKind(ConstTag.MZV, (2,)), Fraction(-1, 2))) == "-1/2*zeta(2)"


def test_swap_args():
    expr = Expr.fun(li((2,)))
    assert expr.swap_args().equals(Expr.fun(li((2,), MIRROR)))
    with pytest.raises(DomainError):
        Expr.fun(FunFactor(FunKind.A, (2,))).swap_args()


def test_dilogarithm_reflection():
    lhs, rhs = thm_main2((2,))
    assert lhs.equals(Expr.fun(li((2,), MIRROR)))
    expected = Expr.of(
        Term(Fraction(1), (ConstKind(ConstTag.MZV, (2,)),)),
        Term(Fraction(-1), (), (li((2,)),)),
        Term(Fraction(-1), (), (li((1,), MIRROR), li((1,)))),
    )
    assert rhs.equals(expected)


def test_level2_uses_a_at_level2_argument():
    lhs, rhs = thm_main2((2,), level=2)
    assert lhs.terms[0].funs[0] == FunFactor(FunKind.A, (2,), ArgTag.LEVEL2_FRAC)
    assert all(c.tag == ConstTag.MTV for t in rhs for c in t.consts)


@pytest.mark.parametrize("w", [1, 2, 3, 4, 5])
def test_functional_equations_are_homogeneous(w):
    for k in positive_indices(w):
        assert check_weights(thm_main2(k))
        for m in (1, 2):
            assert check_weights(thm_main1(k, m))


def test_xi_at_depth_one():
    lhs, rhs = thm_main1((1,), 1)
    assert lhs.equals(Expr.const(ConstKind(ConstTag.XI, (1,), 2)))
    expected = Expr.of(Term(Fraction(1), (ConstKind(ConstTag.EZ_INT, (), 3),), (), (2, 1)))
    assert rhs.equals(expected)


def test_log_expansion_of_depth_one():
    lhs, rhs = ak_dep1(1)
    assert lhs.equals(Expr.fun(li((1,), MIRROR)))
    assert rhs.equals(Expr.of(Term(Fraction(-1), (), (FunFactor(FunKind.LOG),))))


@pytest.mark.parametrize("a", [1, 2, 3])
@pytest.mark.parametrize("b", [0, 1, 2, 3])
def test_single_block_expansion_agrees_with_functional_equation(a, b):
    assert xu_2_8_symbolic_check(a, b)


def test_classical_builders_are_homogeneous():
    for a in range(1, 4):
        for b in range(3):
            assert check_weights(xu_2_8(a, b))
            assert check_weights(ak_thm8(a, b, 2))
            assert check_weights(ak_thm9_2(a, b, 2))


@pytest.mark.parametrize("reading", list(Reading))
def test_xi_duality_readings_are_homogeneous(reading):
    assert check_weights(xu_thm3_3(1, 2, (2, 3), reading))


@pytest.mark.parametrize("builder, args, error", [
    (thm_main2, ((),), EmptyIndex),
    (thm_main2, ((2,), 3), DomainError),
    (thm_main1, ((1,), 0), DomainError),
    (cor_main, ((),  1), EmptyIndex),
    (ak_dep1, (0,), DomainError),
    (ak_thm8, (0, 1, 1), DomainError),
    (xu_2_8, (1, -1), DomainError),
    (xu_thm3_3, (1, 1, (1,)), DomainError),
    (xu_thm3_3, (0, 1, (2,)), DomainError),
])
def test_builder_errors(builder, args, error):
    with pytest.raises(error):
        builder(*args)
