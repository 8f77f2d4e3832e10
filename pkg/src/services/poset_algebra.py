"""
2-poset services

A 2-poset is a finite poset whose elements carry a label 0 (drawn as a
circle) or 1 (a bullet). Elements are the integers 0..n-1 and the order
is given by covering pairs (lower, upper). The W map sends a 2-poset to
the sum of the label words of its linear extensions, read bottom to top;
composing with Li, zeta, A or T gives the iterated integrals I_z and I.

This module also builds the named posets used by the functional
equations and checks the rewriting identities between them at the level
of words.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from numpy.polynomial import Chebyshev

from ..core.interfaces import (
    DomainError, EmptyIndex, InvalidPoset, NotAdmissible, NotSemiAdmissible, ParseError, TooLarge
)
from .index_core import check_positive, is_admissible, ones
from .numerics import Evaluator, default_evaluator
from .realball import RealBall, ball_sum
from .series import Argument, check_unit_interval
from .word_algebra import WordSum, index_to_word, shuffle, word_to_index

logger = logging.getLogger(__name__)

Cover = Tuple[int, int]

QUADRATURE_MAX_SIZE = 4
QUADRATURE_MAX_Z = Fraction(9, 10)


@dataclass(frozen=True)
class TwoPoset:
    """
    Labeled finite poset.

    Raises:
        InvalidPoset: if a label is not 0/1, a cover refers to a missing
            element, or the covers contain a cycle
    """
    labels: Tuple[int, ...] = ()
    covers: FrozenSet[Cover] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "covers", frozenset((int(a), int(b)) for a, b in self.covers))
        n = len(self.labels)
        if any(label not in (0, 1) for label in self.labels):
            raise InvalidPoset(f"Labels must be 0 or 1: {self.labels}")
        for lower, upper in self.covers:
            if not (0 <= lower < n and 0 <= upper < n):
                raise InvalidPoset(f"Cover ({lower},{upper}) refers to a missing element")
            if lower == upper:
                raise InvalidPoset(f"Element {lower} covers itself")
        for element in range(n):
            if element in self.above[element]:
                raise InvalidPoset(f"Covers contain a cycle through element {element}")

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def above(self) -> Tuple[FrozenSet[int], ...]:
        """above[x] is the set of y with x < y."""
        n = len(self.labels)
        successors: List[List[int]] = [[] for _ in range(n)]
        for lower, upper in self.covers:
            successors[lower].append(upper)
        result = []
        for start in range(n):
            seen = set()
            stack = list(successors[start])
            while stack:
                y = stack.pop()
                if y in seen:
                    continue
                seen.add(y)
                if y == start:
                    break
                stack.extend(successors[y])
            result.append(frozenset(seen))
        return tuple(result)

    def less(self, x: int, y: int) -> bool:
        return y in self.above[x]

    def comparable(self, x: int, y: int) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def minimal_elements(self) -> List[int]:
        uppers = {upper for _, upper in self.covers}
        return [x for x in range(self.size) if x not in uppers]

    def maximal_elements(self) -> List[int]:
        lowers = {lower for lower, _ in self.covers}
        return [x for x in range(self.size) if x not in lowers]

    def relation(self) -> FrozenSet[Cover]:
        """The strict order as a set of pairs."""
        return frozenset((x, y) for x in range(self.size) for y in self.above[x])

    def to_dict(self) -> Dict[str, Any]:
        return {"labels": list(self.labels), "covers": [list(c) for c in sorted(self.covers)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TwoPoset":
        try:
            labels = [int(x) for x in data["labels"]]
            covers = [(int(a), int(b)) for a, b in data.get("covers", [])]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Invalid poset description: {e}") from e
        return cls(tuple(labels), frozenset(covers))

    @classmethod
    def from_json(cls, text: str) -> "TwoPoset":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid poset JSON: {e}") from e
        if not isinstance(data, dict):
            raise ParseError("Poset JSON must be an object")
        return cls.from_dict(data)


def is_semi_admissible(x: TwoPoset) -> bool:
    """Every minimal element is labeled 1."""
    return all(x.labels[e] == 1 for e in x.minimal_elements())


def is_admissible_poset(x: TwoPoset) -> bool:
    """Semi-admissible and every maximal element is labeled 0."""
    return is_semi_admissible(x) and all(x.labels[e] == 0 for e in x.maximal_elements())


def transpose(x: TwoPoset) -> TwoPoset:
    """Reverse the order and flip every label."""
    return TwoPoset(tuple(1 - label for label in x.labels),
                    frozenset((upper, lower) for lower, upper in x.covers))


def disjoint_union(x: TwoPoset, y: TwoPoset) -> TwoPoset:
    """Side by side, with the elements of y shifted past those of x."""
    shift = x.size
    covers = set(x.covers) | {(a + shift, b + shift) for a, b in y.covers}
    return TwoPoset(x.labels + y.labels, frozenset(covers))


class PosetBuilder:
    """Incremental construction of a TwoPoset from labeled nodes and covers"""

    def __init__(self):
        self.labels: List[int] = []
        self.covers: set = set()

    def node(self, label: int) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def cover(self, lower: int, upper: int) -> None:
        self.covers.add((lower, upper))

    def chain(self, word: str, below: Optional[int] = None, above: Optional[int] = None) -> List[int]:
        """
        Add a chain whose labels read `word` bottom to top.

        Args:
            word: Labels as a '0'/'1' string
            below: Optional element the top of the chain must lie below
            above: Optional element the bottom of the chain must lie above

        Returns:
            Element ids, bottom first
        """
        ids = [self.node(int(letter)) for letter in word]
        for lower, upper in zip(ids, ids[1:]):
            self.cover(lower, upper)
        if ids and below is not None:
            self.cover(ids[-1], below)
        if ids and above is not None:
            self.cover(above, ids[0])
        return ids

    def hanging(self, count: int, label: int, below: int) -> List[int]:
        """A chain of `count` nodes hanging below `below`, listed top first."""
        ids = []
        upper = below
        for _ in range(count):
            node = self.node(label)
            self.cover(node, upper)
            ids.append(node)
            upper = node
        return ids

    def build(self) -> TwoPoset:
        return TwoPoset(tuple(self.labels), frozenset(self.covers))


# --- the W map ------------------------------------------------------------

def _close_with(relation: FrozenSet[Cover], lower: int, upper: int, n: int) -> FrozenSet[Cover]:
    """Transitive closure after adding lower < upper."""
    downs = [x for x in range(n) if x == lower or (x, lower) in relation]
    ups = [y for y in range(n) if y == upper or (upper, y) in relation]
    return relation | frozenset((x, y) for x in downs for y in ups)


@lru_cache(maxsize=16384)
def _w_closed(labels: Tuple[int, ...], relation: FrozenSet[Cover]) -> Tuple[Tuple[str, int], ...]:
    n = len(labels)
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in relation and (b, a) not in relation:
                counts: Dict[str, int] = {}
                for lower, upper in ((a, b), (b, a)):
                    for word, count in _w_closed(labels, _close_with(relation, lower, upper, n)):
                        counts[word] = counts.get(word, 0) + count
                return tuple(sorted(counts.items()))
    order = sorted(range(n), key=lambda x: sum(1 for y in range(n) if (y, x) in relation))
    return (("".join(str(labels[x]) for x in order), 1),)


def w_map(x: TwoPoset) -> WordSum:
    """
    W(X), by splitting on the lexicographically smallest incomparable
    pair until every poset is a chain.
    """
    return WordSum(dict(_w_closed(x.labels, x.relation())))


def linear_extensions(x: TwoPoset) -> Iterator[Tuple[int, ...]]:
    """Every linear extension, bottom element first."""
    n = x.size
    below_count = [0] * n
    successors: List[List[int]] = [[] for _ in range(n)]
    for lower, upper in x.covers:
        below_count[upper] += 1
        successors[lower].append(upper)

    order: List[int] = []

    def extend() -> Iterator[Tuple[int, ...]]:
        if len(order) == n:
            yield tuple(order)
            return
        for e in range(n):
            if below_count[e] == 0 and e not in order:
                order.append(e)
                for s in successors[e]:
                    below_count[s] -= 1
                yield from extend()
                for s in successors[e]:
                    below_count[s] += 1
                order.pop()

    yield from extend()


def w_map_by_extensions(x: TwoPoset) -> WordSum:
    """Reference W(X): one word per linear extension."""
    counts: Dict[str, int] = {}
    for extension in linear_extensions(x):
        word = "".join(str(x.labels[e]) for e in extension)
        counts[word] = counts.get(word, 0) + 1
    return WordSum(counts)


# --- named posets -----------------------------------------------------------

def chain_from_index(k: Sequence[int]) -> TwoPoset:
    """Totally ordered 2-poset whose word is index_to_word(k)."""
    builder = PosetBuilder()
    builder.chain(index_to_word(k))
    return builder.build()


def xi_poset(k: Sequence[int], m: int) -> TwoPoset:
    """
    The chain of k and a chain of m-1 bullets, both below one new top
    circle. zeta(W(xi_poset(k, m))) = xi(k; m).
    """
    k = check_positive(k)
    if not k:
        raise EmptyIndex("xi_poset needs a non-empty index")
    if m < 1:
        raise DomainError(f"xi_poset needs m >= 1, got {m}")
    builder = PosetBuilder()
    top = builder.node(0)
    builder.chain(index_to_word(k), below=top)
    builder.chain("1" * (m - 1), below=top)
    return builder.build()


def v_poset(l: Sequence[int], i: int, j: int) -> TwoPoset:
    """
    v_{i,j}: the chain of l, a chain h_1 > ... > h_i of bullets hanging
    below its top, and a chain of j bullets sitting above h_i (above the
    top of l when i = 0).
    """
    l = check_positive(l)
    if not l or not is_admissible(l):
        raise NotAdmissible(f"v_poset needs a non-empty admissible index, got {l}")
    if i < 0 or j < 0:
        raise DomainError("v_poset parameters must be non-negative")
    builder = PosetBuilder()
    top = builder.chain(index_to_word(l))[-1]
    hung = builder.hanging(i, 1, top)
    base = hung[-1] if hung else top
    builder.chain("1" * j, above=base)
    return builder.build()


def limit_word_sides(l: Sequence[int], a: int) -> Tuple[WordSum, WordSum]:
    """
    Both sides of
        W(chain(l,{1}^a)) - sum_{d=1}^a (-1)^{a-d} W(v_{a-d,0}) ш W({1}^d)
            = (-1)^a W(v_{a,0})
    """
    l = check_positive(l)
    left = w_map(chain_from_index(l + ones(a)))
    for d in range(1, a + 1):
        product = shuffle(w_map(v_poset(l, a - d, 0)), index_to_word(ones(d)))
        left = left - product * (-1) ** (a - d)
    right = w_map(v_poset(l, a, 0)) * (-1) ** a
    return left, right


def limit_word_identity_check(l: Sequence[int], a: int) -> bool:
    left, right = limit_word_sides(l, a)
    return left == right


class RewriteVariant(Enum):
    """The two rewriting identities for a chain attached below another chain's top"""
    B_BRANCH = "b-branch"
    A_BRANCH = "a-branch"


def rewrite_sides(k: Sequence[int], l: Sequence[int], param: int,
                  variant: RewriteVariant) -> Tuple[WordSum, WordSum]:
    """
    Word images of both sides of a rewriting identity.

    B_BRANCH (param b circles): the chain of k topped by b circles, the top
    of which lies below the top of l, equals
        sum_{j<b} (-1)^j W(k + (b-j) circles) ш W(l + j circles) + (-1)^b W(Y)
    where Y is the chain of l topped by b circles with top(k) below its top.

    A_BRANCH (param a bullets): the chain of k topped by a bullets, the top
    of which lies below top(l), equals
        sum_{j<=a} (-1)^j W(P_j) ш W(Q_j) + (-1)^(a+1) W(Y')
    where P_j hangs j bullets below top(k), Q_j hangs a-j bullets below
    top(l), and Y' is the chain of l topped by a bullets lying below top(k).
    """
    k = check_positive(k)
    l = check_positive(l)
    if not k or not l:
        raise DomainError("Rewriting identities need non-empty indices")
    if param < 0:
        raise DomainError("Parameter must be non-negative")
    word_k, word_l = index_to_word(k), index_to_word(l)

    if variant == RewriteVariant.B_BRANCH:
        b = param
        lhs_builder = PosetBuilder()
        top_l = lhs_builder.chain(word_l)[-1]
        lhs_builder.chain(word_k + "0" * b, below=top_l)
        lhs = w_map(lhs_builder.build())

        rhs = WordSum()
        for j in range(b):
            rhs = rhs + shuffle(word_k + "0" * (b - j), word_l + "0" * j) * (-1) ** j
        y = PosetBuilder()
        top_y = y.chain(word_l + "0" * b)[-1]
        y.chain(word_k, below=top_y)
        rhs = rhs + w_map(y.build()) * (-1) ** b
        return lhs, rhs

    a = param
    lhs_builder = PosetBuilder()
    top_l = lhs_builder.chain(word_l)[-1]
    lhs_builder.chain(word_k + "1" * a, below=top_l)
    lhs = w_map(lhs_builder.build())

    rhs = WordSum()
    for j in range(a + 1):
        p = PosetBuilder()
        p.hanging(j, 1, p.chain(word_k)[-1])
        q = PosetBuilder()
        q.hanging(a - j, 1, q.chain(word_l)[-1])
        rhs = rhs + w_map(p.build()).shuffle(w_map(q.build())) * (-1) ** j
    y = PosetBuilder()
    top_k = y.chain(word_k)[-1]
    y.chain(word_l + "1" * a, below=top_k)
    rhs = rhs + w_map(y.build()) * (-1) ** (a + 1)
    return lhs, rhs


def idou_rewrite_check(k: Sequence[int], l: Sequence[int], param: int,
                       variant: RewriteVariant) -> bool:
    """True iff both sides of the rewriting identity have equal word images."""
    lhs, rhs = rewrite_sides(k, l, param, variant)
    if lhs != rhs:
        logger.warning(f"Rewriting identity {variant.value} failed for k={k}, l={l}, param={param}")
    return lhs == rhs


# --- integrals ----------------------------------------------------------------

def _evaluate_words(words: WordSum, fn, precision: int) -> RealBall:
    terms = [fn(word_to_index(word)) * coeff for word, coeff in words]
    return ball_sum(terms, precision).with_prec(precision)


def i_z(x: TwoPoset, z: Argument, precision: Optional[int] = None,
        evaluator: Optional[Evaluator] = None) -> RealBall:
    """
    I_z(X) = Li(W(X); z).

    Raises:
        NotSemiAdmissible: if a minimal element is labeled 0
        DomainError: unless 0 < z < 1
    """
    evaluator = evaluator or default_evaluator()
    p = precision or evaluator.precision
    if not is_semi_admissible(x):
        raise NotSemiAdmissible("I_z needs a semi-admissible 2-poset")
    q = check_unit_interval(z)
    return _evaluate_words(w_map(x), lambda k: evaluator.li_eval(k, q, p + 8), p)


def i_one(x: TwoPoset, precision: Optional[int] = None,
          evaluator: Optional[Evaluator] = None) -> RealBall:
    """
    I(X) = zeta(W(X)).

    Raises:
        NotAdmissible: if X is not admissible
    """
    evaluator = evaluator or default_evaluator()
    p = precision or evaluator.precision
    if not is_admissible_poset(x):
        raise NotAdmissible("I needs an admissible 2-poset")
    return evaluator.zeta_word_sum(w_map(x), p)


def i_z_level2(x: TwoPoset, z: Argument, precision: Optional[int] = None,
               evaluator: Optional[Evaluator] = None) -> RealBall:
    """A(W(X); z)."""
    evaluator = evaluator or default_evaluator()
    p = precision or evaluator.precision
    if not is_semi_admissible(x):
        raise NotSemiAdmissible("A(W(X);z) needs a semi-admissible 2-poset")
    q = check_unit_interval(z)
    return _evaluate_words(w_map(x), lambda k: evaluator.a_eval(k, q, p + 8), p)


def i_one_level2(x: TwoPoset, precision: Optional[int] = None,
                 evaluator: Optional[Evaluator] = None) -> RealBall:
    """T(W(X))."""
    evaluator = evaluator or default_evaluator()
    p = precision or evaluator.precision
    if not is_admissible_poset(x):
        raise NotAdmissible("T(W(X)) needs an admissible 2-poset")
    return evaluator.zeta_word_sum(w_map(x), p, level=2)


# --- quadrature oracle ------------------------------------------------------------

def _iterated_integral(word: str, z: float, degree: int) -> float:
    """
    Integral of the word's forms over 0 < t_1 < ... < t_n < z by repeated
    Chebyshev interpolation and integration on [0, z].
    """
    domain = [0.0, z]
    current = Chebyshev([1.0], domain=domain)
    for letter in word:
        previous = current
        if letter == "1":
            integrand = Chebyshev.interpolate(lambda t: previous(t) / (1.0 - t), degree, domain=domain)
        else:
            integrand = Chebyshev.interpolate(lambda t: previous(t) / t, degree, domain=domain)
        current = integrand.integ(lbnd=0.0)
    return float(current(z))


def quadrature_oracle(x: TwoPoset, z: Argument, target_error: float = 1e-6) -> RealBall:
    """
    Low-precision I_z(X) by direct numerical integration, one simplex per
    linear extension. The degree doubles from 32 to 512 until successive
    estimates agree to within target_error / 10.

    Raises:
        TooLarge: if X has more than four elements
        NotSemiAdmissible: if X is not semi-admissible
        DomainError: unless 0 < z <= 0.9
    """
    if x.size > QUADRATURE_MAX_SIZE:
        raise TooLarge(f"Quadrature oracle handles at most {QUADRATURE_MAX_SIZE} elements")
    if not is_semi_admissible(x):
        raise NotSemiAdmissible("Quadrature oracle needs a semi-admissible 2-poset")
    q = check_unit_interval(z)
    if q > QUADRATURE_MAX_Z:
        raise DomainError(f"Quadrature oracle needs z <= 0.9, got {float(q)}")
    if x.size == 0:
        return RealBall.exact(1, 53)
    zf = float(q)
    words = w_map(x)

    def estimate(degree: int) -> float:
        return sum(float(c) * _iterated_integral(w, zf, degree) for w, c in words)

    degree = 32
    previous = estimate(degree)
    while degree < 512:
        degree *= 2
        current = estimate(degree)
        difference = abs(current - previous)
        previous = current
        if difference <= target_error / 10:
            break
    error = difference + 1e-14 * (1 + abs(previous))
    logger.debug(f"quadrature: degree {degree}, estimate {previous}, error {error:.2e}")
    return RealBall.from_mpf(previous, error, prec=53)
