from fractions import Fraction

import mpmath
import numpy as np
import pytest

from src.core.interfaces import (
    DomainError, EmptyIndex, InvalidPoset, NotAdmissible, NotSemiAdmissible, ParseError, TooLarge
)
from src.services.poset_algebra import (
    PosetBuilder, RewriteVariant, TwoPoset, chain_from_index, disjoint_union, i_one,
    i_one_level2, i_z, i_z_level2, idou_rewrite_check, is_admissible_poset, is_semi_admissible,
    limit_word_identity_check, linear_extensions, quadrature_oracle, rewrite_sides, transpose,
    v_poset, w_map, w_map_by_extensions, xi_poset
)
from src.services.suites import random_poset
from src.services.word_algebra import WordSum, word_dual

ANTICHAIN = TwoPoset((1, 0))


@pytest.mark.parametrize("labels, covers", [
    ((2,), ()),
    ((1, 0), ((0, 2),)),
    ((1,), ((0, 0),)),
    ((1, 0, 1), ((0, 1), (1, 2), (2, 0))),
])
def test_invalid_posets(labels, covers):
    with pytest.raises(InvalidPoset):
        TwoPoset(labels, frozenset(covers))


def test_json_round_trip():
    x = TwoPoset((1, 1, 0), frozenset({(0, 2), (1, 2)}))
    assert TwoPoset.from_json(x.to_json()) == x
    assert x.to_dict() == {"labels": [1, 1, 0], "covers": [[0, 2], [1, 2]]}


@pytest.mark.parametrize("text", ["not json", "[1, 0]", '{"covers": []}', '{"labels": ["a"]}'])
def test_invalid_json(text):
    with pytest.raises(ParseError):
        TwoPoset.from_json(text)


def test_order_queries():
    x = chain_from_index((1, 2))
    assert x.less(0, 2) and not x.less(2, 0)
    assert x.comparable(0, 1)
    assert x.minimal_elements() == [0]
    assert x.maximal_elements() == [2]
    assert not ANTICHAIN.comparable(0, 1)


def test_chain_words():
    assert w_map(chain_from_index((1, 2))) == WordSum.of("110")
    assert w_map(TwoPoset()) == WordSum.one()


def test_antichain_word_map():
    assert w_map(ANTICHAIN) == WordSum({"10": 1, "01": 1})


def test_linear_extensions_of_antichain():
    assert len(list(linear_extensions(TwoPoset((1, 1, 0))))) == 6


def test_word_map_agrees_with_extensions():
    rng = np.random.default_rng(7)
    for _ in range(50):
        x = random_poset(rng)
        assert w_map(x) == w_map_by_extensions(x)


def test_disjoint_union_shuffles_words():
    x = chain_from_index((2,))
    y = chain_from_index((1,))
    assert w_map(disjoint_union(x, y)) == w_map(x).shuffle(w_map(y))


def test_transpose_dualizes_words():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 20:
        x = random_poset(rng, max_size=6)
        if not is_admissible_poset(x):
            continue
        assert is_admissible_poset(transpose(x))
        assert w_map(transpose(x)) == w_map(x).map_words(word_dual)
        checked += 1


def test_admissibility():
    assert is_admissible_poset(chain_from_index((1, 2)))
    assert is_semi_admissible(chain_from_index((2, 1)))
    assert not is_admissible_poset(chain_from_index((2, 1)))
    assert not is_semi_admissible(ANTICHAIN)


def test_builder():
    builder = PosetBuilder()
    top = builder.node(0)
    builder.chain("1", below=top)
    builder.hanging(2, 1, top)
    x = builder.build()
    assert x.size == 4
    assert x.maximal_elements() == [top]


def test_xi_poset_words():
    assert w_map(xi_poset((1,), 2)) == WordSum({"110": 2})
    assert w_map(xi_poset((2,), 1)) == WordSum.of("100")
    with pytest.raises(EmptyIndex):
        xi_poset((), 2)
    with pytest.raises(DomainError):
        xi_poset((1,), 0)


@pytest.mark.parametrize("k, m", [((1,), 2), ((2,), 2), ((1, 2), 1), ((2, 1), 3)])
def test_integral_of_xi_poset(evaluator, k, m):
    x = xi_poset(k, m)
    assert i_one(x, evaluator=evaluator).overlaps(evaluator.xi_int(k, m))
    assert i_one_level2(x, evaluator=evaluator).overlaps(evaluator.psi_int(k, m))


def test_integral_needs_admissible_poset(evaluator):
    with pytest.raises(NotAdmissible):
        i_one(chain_from_index((2, 1)), evaluator=evaluator)
    with pytest.raises(NotAdmissible):
        i_one_level2(chain_from_index((2, 1)), evaluator=evaluator)


def test_integral_at_z(evaluator):
    half = Fraction(1, 2)
    x = chain_from_index((1, 2))
    assert i_z(x, half, evaluator=evaluator).overlaps(evaluator.li_eval((1, 2), half))
    assert i_z_level2(x, half, evaluator=evaluator).overlaps(evaluator.a_eval((1, 2), half))
    with pytest.raises(NotSemiAdmissible):
        i_z(ANTICHAIN, half, evaluator=evaluator)


def test_v_poset(evaluator):
    x = v_poset((2,), 1, 0)
    assert w_map(x) == WordSum({"110": 2})
    with mpmath.workprec(300):
        expected = 2 * mpmath.zeta(3)
    assert i_one(x, evaluator=evaluator).contains(expected)
    with pytest.raises(NotAdmissible):
        v_poset((2, 1), 1, 0)
    with pytest.raises(DomainError):
        v_poset((2,), -1, 0)


@pytest.mark.parametrize("l", [(2,), (3,), (1, 2)])
@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_limit_word_identity(l, a):
    assert limit_word_identity_check(l, a)


@pytest.mark.parametrize("variant", list(RewriteVariant))
def test_rewriting_identities(variant):
    for k in [(1,), (2,), (1, 1), (2, 1)]:
        for l in [(1,), (2,), (1, 2)]:
            for param in range(3):
                assert idou_rewrite_check(k, l, param, variant)


def test_rewrite_needs_indices():
    with pytest.raises(DomainError):
        rewrite_sides((), (1,), 1, RewriteVariant.B_BRANCH)
    with pytest.raises(DomainError):
        rewrite_sides((1,), (1,), -1, RewriteVariant.A_BRANCH)


def test_quadrature_oracle():
    with mpmath.workprec(100):
        expected = mpmath.polylog(2, 0.5)
    value = quadrature_oracle(chain_from_index((2,)), Fraction(1, 2))
    assert abs(value.mid - expected) < 1e-6


def test_quadrature_oracle_limits():
    with pytest.raises(TooLarge):
        quadrature_oracle(chain_from_index((5,)), Fraction(1, 2))
    with pytest.raises(DomainError):
        quadrature_oracle(chain_from_index((2,)), Fraction(95, 100))
    with pytest.raises(NotSemiAdmissible):
        quadrature_oracle(ANTICHAIN, Fraction(1, 2))
