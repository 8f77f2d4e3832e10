"""
Identity builders

Each builder returns a pair (lhs, rhs) of symbolic expressions: finite
Q-linear combinations of products of named constants (ConstKind),
functions of z (FunFactor) and at most one binomial coefficient.
Verification evaluates both sides as RealBalls; symbolic comparison uses
Expr.canonicalize.

The level-2 variants are obtained from the level-1 constructions by the
substitution zeta -> T, xi -> psi, Li(.;z) -> A(.;z) and
Li(.;1-z) -> A(.;(1-z)/(1+z)).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from ..core.interfaces import DomainError, EmptyIndex
from .index_core import (
    Index, add, binom_b, check_positive, compositions, dual, e_plus, format_index,
    head, hoffman_dual, k_minus, ones, reverse_blocks, tail, to_blocks, weight
)
from .numerics import ConstKind, ConstTag

logger = logging.getLogger(__name__)


class FunKind(Enum):
    """Functions of z that may appear in an identity"""
    LI = "Li"
    A = "A"
    LOG = "log"


class ArgTag(Enum):
    """Argument a function factor is evaluated at"""
    Z = "z"
    ONE_MINUS_Z = "1-z"
    LEVEL2_FRAC = "(1-z)/(1+z)"


@dataclass(frozen=True)
class FunFactor:
    """
    One function factor, e.g. Li(k; 1-z).

    Raises:
        DomainError: LEVEL2_FRAC used outside A, or LOG with an index
    """
    kind: FunKind
    index: Index = ()
    arg: ArgTag = ArgTag.Z

    def __post_init__(self):
        object.__setattr__(self, "index", check_positive(self.index))
        if self.arg == ArgTag.LEVEL2_FRAC and self.kind != FunKind.A:
            raise DomainError("(1-z)/(1+z) is only used with A")
        if self.kind == FunKind.LOG and (self.index or self.arg != ArgTag.Z):
            raise DomainError("log factor is log(z) and takes no index")

    @property
    def is_unit(self) -> bool:
        return self.kind != FunKind.LOG and not self.index

    @property
    def weight(self) -> int:
        return 1 if self.kind == FunKind.LOG else sum(self.index)

    def sort_key(self) -> Tuple:
        return self.kind.value, self.index, self.arg.value

    def __str__(self) -> str:
        if self.kind == FunKind.LOG:
            return "log(z)"
        inner = ",".join(str(x) for x in self.index)
        return f"{self.kind.value}({inner};{self.arg.value})"


Binom = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class Term:
    """coeff * prod(consts) * prod(funs) * C(n, k)"""
    coeff: Fraction
    consts: Tuple[ConstKind, ...] = ()
    funs: Tuple[FunFactor, ...] = ()
    binom: Binom = None

    def key(self) -> Tuple:
        consts = tuple(sorted((c for c in self.consts if not c.is_unit), key=lambda c: c.sort_key()))
        funs = tuple(sorted((f for f in self.funs if not f.is_unit), key=lambda f: f.sort_key()))
        binom = self.binom if self.binom is not None and self.binom[1] != 0 else None
        return consts, funs, binom

    @property
    def weight(self) -> int:
        return sum(c.weight for c in self.consts) + sum(f.weight for f in self.funs)

    def __str__(self) -> str:
        parts = [str(c) for c in self.consts] + [str(f) for f in self.funs]
        if self.binom is not None:
            parts.insert(0, f"C({self.binom[0]},{self.binom[1]})")
        body = "*".join(parts) if parts else "1"
        return f"{self.coeff}*{body}" if self.coeff != 1 else body

    def to_dict(self) -> Dict[str, Any]:
        return {
            'coeff': str(self.coeff),
            'consts': [str(c) for c in self.consts],
            'funs': [str(f) for f in self.funs],
            'binom': list(self.binom) if self.binom else None,
        }


@dataclass
class Expr:
    """A finite linear combination of Terms"""
    terms: List[Term] = field(default_factory=list)

    @classmethod
    def of(cls, *terms: Term) -> "Expr":
        return cls(list(terms))

    @classmethod
    def const(cls, kind: ConstKind, coeff: Fraction = Fraction(1)) -> "Expr":
        return cls([Term(Fraction(coeff), (kind,))])

    @classmethod
    def fun(cls, factor: FunFactor, coeff: Fraction = Fraction(1)) -> "Expr":
        return cls([Term(Fraction(coeff), (), (factor,))])

    def __add__(self, other: "Expr") -> "Expr":
        return Expr(self.terms + other.terms)

    def __neg__(self) -> "Expr":
        return self.scale(-1)

    def __sub__(self, other: "Expr") -> "Expr":
        return self + (-other)

    def scale(self, factor) -> "Expr":
        factor = Fraction(factor)
        return Expr([Term(t.coeff * factor, t.consts, t.funs, t.binom) for t in self.terms])

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def canonicalize(self) -> "Expr":
        """
        Drop unit factors, merge terms with equal factors, drop zero
        coefficients and sort.
        """
        merged: Dict[Tuple, Fraction] = {}
        for t in self.terms:
            consts, funs, binom = t.key()
            merged[(consts, funs, binom)] = merged.get((consts, funs, binom), Fraction(0)) + t.coeff
        terms = [
            Term(coeff, consts, funs, binom)
            for (consts, funs, binom), coeff in merged.items() if coeff != 0
        ]
        terms.sort(key=lambda t: (
            [c.sort_key() for c in t.consts], [f.sort_key() for f in t.funs], t.binom or (0, 0)
        ))
        return Expr(terms)

    def swap_args(self) -> "Expr":
        """Exchange z and 1-z in every Li factor."""
        swap = {ArgTag.Z: ArgTag.ONE_MINUS_Z, ArgTag.ONE_MINUS_Z: ArgTag.Z}
        terms = []
        for t in self.terms:
            funs = []
            for f in t.funs:
                if f.kind != FunKind.LI:
                    raise DomainError(f"Cannot swap the argument of {f}")
                funs.append(FunFactor(f.kind, f.index, swap[f.arg]))
            terms.append(Term(t.coeff, t.consts, tuple(funs), t.binom))
        return Expr(terms)

    def equals(self, other: "Expr") -> bool:
        return self.canonicalize().terms == other.canonicalize().terms

    def weights(self) -> List[int]:
        return sorted({t.weight for t in self.canonicalize().terms})

    def to_dict(self) -> List[Dict[str, Any]]:
        return [t.to_dict() for t in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        text = " + ".join(str(t) for t in self.terms)
        return text.replace("+ -", "- ")


Identity = Tuple[Expr, Expr]


@dataclass(frozen=True)
class LevelMap:
    """Constant and function tags used at one level"""
    level: int
    zeta: ConstTag
    xi: ConstTag
    zeta_int: ConstTag
    fun: FunKind
    mirror: ArgTag


LEVELS = {
    1: LevelMap(1, ConstTag.MZV, ConstTag.XI, ConstTag.EZ_INT, FunKind.LI, ArgTag.ONE_MINUS_Z),
    2: LevelMap(2, ConstTag.MTV, ConstTag.PSI, ConstTag.T_INT, FunKind.A, ArgTag.LEVEL2_FRAC),
}


def _level(level: int) -> LevelMap:
    try:
        return LEVELS[level]
    except KeyError:
        raise DomainError(f"Unknown level {level}") from None


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _nonempty(k: Sequence[int]) -> Index:
    k = check_positive(k)
    if not k:
        raise EmptyIndex("Identity needs a non-empty index")
    return k


# --- shared decomposition -----------------------------------------------------

MainTerm = Tuple[int, Index, int, Index]


def _main_terms(k: Index) -> Iterator[MainTerm]:
    """
    Terms (coeff, const_index, d, fun_index) of the decomposition shared by
    the functional equation and its xi counterpart. With blocks (a_l, b_l),
    k^l the tail after block l and k_{l-1} the head before it.
    """
    blocks = to_blocks(k)
    n = len(blocks)
    if blocks[-1].b != 0:
        yield 1, k, 0, ()

    for l, (a, b) in enumerate(blocks, start=1):
        rest = tail(k, l)
        before = head(k, l - 1)
        for j in range(b - 1):
            coeff = -_sign(j + weight(rest))
            const = before + ones(a - 1) + (b - j,)
            yield coeff, const, 0, hoffman_dual((j + 1,) + rest)

    for l, (a, b) in enumerate(blocks, start=1):
        rest = tail(k, l)
        sign = _sign(b + weight(rest))
        hd = dual(head(k, l - 1))
        blt = hoffman_dual((b,) + rest)
        for d in range(a + 1):
            for w1 in range(a - d + 1):
                w2 = a - d - w1
                for e1 in compositions(w1, len(hd)):
                    b1 = binom_b(hd, e1)
                    for e2 in compositions(w2, len(blt)):
                        coeff = sign * _sign(w1) * b1 * binom_b(blt, e2)
                        yield coeff, add(hd, e1), d, add(blt, e2)
    logger.debug(f"main decomposition of {format_index(k)} has {n} blocks")


def thm_main2(k: Sequence[int], level: int = 1) -> Identity:
    """
    Functional equation expressing Li(k;1-z) (or A(k;(1-z)/(1+z)) at level 2)
    through zeta values and functions of z.
    """
    k = _nonempty(k)
    lv = _level(level)
    lhs = Expr.fun(FunFactor(lv.fun, k, lv.mirror))
    terms = []
    for coeff, const, d, fun in _main_terms(k):
        terms.append(Term(
            Fraction(coeff),
            (ConstKind(lv.zeta, const),),
            (FunFactor(lv.fun, ones(d), lv.mirror), FunFactor(lv.fun, fun, ArgTag.Z)),
        ))
    return lhs, Expr(terms)


def thm_main2_lv2(k: Sequence[int]) -> Identity:
    return thm_main2(k, level=2)


def thm_main1(k: Sequence[int], m: int, level: int = 1) -> Identity:
    """
    xi(k; m+1) (psi at level 2) as a combination of zeta values and
    zeta(.; s) values with binomial weights, s = m+1.
    """
    k = _nonempty(k)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    lv = _level(level)
    s = m + 1
    lhs = Expr.const(ConstKind(lv.xi, k, s))
    terms = []
    for coeff, const, d, fun in _main_terms(k):
        terms.append(Term(
            Fraction(coeff),
            (ConstKind(lv.zeta, const), ConstKind(lv.zeta_int, fun, s + d)),
            (),
            (s + d - 1, d),
        ))
    return lhs, Expr(terms)


def thm_main1_lv2(k: Sequence[int], m: int) -> Identity:
    return thm_main1(k, m, level=2)


def _rev_plus(x: Sequence[int]) -> Index:
    """(←x)_+, reading (0) as the empty index, so (0) gives (1)."""
    x = tuple(x)
    if x == (0,):
        return (1,)
    return e_plus(reverse_blocks(x))


def cor_main(k: Sequence[int], m: int, level: int = 1) -> Identity:
    """Duality-type relation between xi(k; m+1) and a mirrored xi value."""
    k = _nonempty(k)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    lv = _level(level)
    blocks = to_blocks(k)
    prefix = ones(m - 1)

    a1, b1 = blocks[0]
    lhs = Expr.const(ConstKind(lv.xi, k, m + 1)) - Expr.const(
        ConstKind(lv.xi, prefix + _rev_plus((b1,) + tail(k, 1)), a1 + 1),
        Fraction(_sign(weight(k) - a1)),
    )

    terms = []
    if blocks[-1].b != 0:
        terms.append(Term(Fraction(1), (ConstKind(lv.zeta, k), ConstKind(lv.zeta, (m + 1,)))))
    for l, (a, b) in enumerate(blocks, start=1):
        rest = tail(k, l)
        before = head(k, l - 1)
        for j in range(b - 1):
            terms.append(Term(
                Fraction(-_sign(j + weight(rest))),
                (ConstKind(lv.zeta, before + ones(a - 1) + (b - j,)),
                 ConstKind(lv.zeta, prefix + _rev_plus((j + 2,) + rest))),
            ))
        if l < 2:
            continue
        inner = k_minus(before)
        mirrored = prefix + _rev_plus((b,) + rest)
        for d in range(a + 1):
            terms.append(Term(
                Fraction(_sign(b + weight(rest) + d)),
                (ConstKind(lv.xi, inner, d + 1), ConstKind(lv.xi, mirrored, a - d + 1)),
            ))
    return lhs, Expr(terms)


def cor_main_lv2(k: Sequence[int], m: int) -> Identity:
    return cor_main(k, m, level=2)


# --- classical special cases ------------------------------------------------------

def _check_ab(a: int, b: int) -> None:
    if a < 1 or b < 0:
        raise DomainError(f"Need a >= 1 and b >= 0, got a={a}, b={b}")


def ak_thm8(a: int, b: int, m: int) -> Identity:
    """xi({1}^{a-1}, b+1; m+1) for a single-block index."""
    _check_ab(a, b)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    s = m + 1
    k = ones(a - 1) + (b + 1,)
    lhs = Expr.const(ConstKind(ConstTag.XI, k, s))
    terms = []
    for j in range(b):
        terms.append(Term(
            Fraction(_sign(j)),
            (ConstKind(ConstTag.MZV, ones(a - 1) + (b + 1 - j,)),
             ConstKind(ConstTag.EZ_INT, ones(j), s)),
        ))
    for d in range(a + 1):
        for e in compositions(a - d, b):
            terms.append(Term(
                Fraction(_sign(b)),
                (ConstKind(ConstTag.EZ_INT, tuple(x + 1 for x in e), s + d),),
                (),
                (s + d - 1, d),
            ))
    return lhs, Expr(terms)


def ak_thm9_2(a: int, b: int, m: int) -> Identity:
    """Duality of xi({1}^{a-1}, b+1; m+1) against xi({1}^{m-1}, b+1; a+1)."""
    _check_ab(a, b)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    lhs = Expr.const(ConstKind(ConstTag.XI, ones(a - 1) + (b + 1,), m + 1)) - Expr.const(
        ConstKind(ConstTag.XI, ones(m - 1) + (b + 1,), a + 1), Fraction(_sign(b))
    )
    terms = [
        Term(Fraction(_sign(j)),
             (ConstKind(ConstTag.MZV, ones(a - 1) + (b + 1 - j,)),
              ConstKind(ConstTag.MZV, ones(m - 1) + (j + 2,))))
        for j in range(b)
    ]
    return lhs, Expr(terms)


def ak_dep1(k: int) -> Identity:
    """Li(k; 1-z) for a depth-one index (k) with k >= 1."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    lhs = Expr.fun(FunFactor(FunKind.LI, (k,), ArgTag.ONE_MINUS_Z))
    terms = []
    outer = _sign(k - 1)
    for i in range(1, k):
        index = ones(i - 1) + (2,) + ones(k - 1 - i)
        terms.append(Term(Fraction(outer), (), (FunFactor(FunKind.LI, index),)))
    for j in range(k - 1):
        terms.append(Term(
            Fraction(_sign(j)),
            (ConstKind(ConstTag.MZV, (k - j,)),),
            (FunFactor(FunKind.LI, ones(j)),),
        ))
    terms.append(Term(
        Fraction(-outer), (), (FunFactor(FunKind.LOG), FunFactor(FunKind.LI, ones(k - 1)))
    ))
    return lhs, Expr(terms)


def xu_2_8(a: int, b: int) -> Identity:
    """Li({1}^{a-1}, b+1; z) through functions of 1-z."""
    _check_ab(a, b)
    lhs = Expr.fun(FunFactor(FunKind.LI, ones(a - 1) + (b + 1,)))
    terms = []
    for j in range(b):
        terms.append(Term(
            Fraction(_sign(j)),
            (ConstKind(ConstTag.MZV, ones(a - 1) + (b + 1 - j,)),),
            (FunFactor(FunKind.LI, ones(j), ArgTag.ONE_MINUS_Z),),
        ))
    for d in range(a + 1):
        for e in compositions(a - d, b):
            terms.append(Term(
                Fraction(_sign(b)),
                (),
                (FunFactor(FunKind.LI, ones(d)),
                 FunFactor(FunKind.LI, tuple(x + 1 for x in e), ArgTag.ONE_MINUS_Z)),
            ))
    return lhs, Expr(terms)


class Reading(Enum):
    """Ways to read the sign and second product of the xi duality with entries >= 2"""
    PRINTED = "printed"
    SHIFTED = "shifted"
    MIRRORED = "mirrored"


def xu_thm3_3(a: int, m: int, ks: Sequence[int], reading: Reading = Reading.PRINTED) -> Identity:
    """
    xi({1}^{a-1}, k_1..k_{r-1}, k_r - 1; m+1) against its mirror
    xi({1}^{m-1}, k_r..k_2, k_1 - 1; a+1), for entries k_i >= 2.

    Raises:
        DomainError: on an entry below 2 or a, m < 1
        NotAdmissible: when the chosen reading produces an undefined zeta value
    """
    ks = tuple(ks)
    if not ks or any(x < 2 for x in ks):
        raise DomainError(f"Entries must be >= 2, got {format_index(ks)}")
    if a < 1 or m < 1:
        raise DomainError(f"Need a, m >= 1, got a={a}, m={m}")
    reading = Reading(reading)
    r = len(ks)
    pa, pm = ones(a - 1), ones(m - 1)

    def kk(t: int) -> int:
        return ks[t - 1] if t >= 1 else 0

    def suffix_sum(start: int) -> int:
        return sum(kk(t) for t in range(max(start, 0), r + 1))

    def down(stop: int) -> Index:
        """k_r, k_{r-1}, ..., k_stop"""
        return tuple(kk(t) for t in range(r, stop - 1, -1))

    lhs = Expr.const(ConstKind(ConstTag.XI, pa + ks[:-1] + (ks[-1] - 1,), m + 1)) - Expr.const(
        ConstKind(ConstTag.XI, pm + down(2) + (ks[0] - 1,), a + 1), Fraction(_sign(sum(ks)))
    )

    terms = []
    for j in range(r):
        outer = _sign(suffix_sum(j + 2))
        for i in range(1, kk(j + 1) - 1):
            terms.append(Term(
                Fraction(outer * _sign(i - 1)),
                (ConstKind(ConstTag.MZV, pm + down(j + 2) + (i + 1,)),
                 ConstKind(ConstTag.MZV, pa + ks[:j] + (kk(j + 1) - i,))),
            ))

    start = {Reading.PRINTED: 0, Reading.SHIFTED: 1, Reading.MIRRORED: 2}[reading]
    for j in range(r - 1):
        sign = Fraction(_sign(suffix_sum(j + start)))
        terms.append(Term(
            sign,
            (ConstKind(ConstTag.MZV, pa + ks[:j + 1]),
             ConstKind(ConstTag.XI, pm + down(j + 3) + (kk(j + 2) - 1,), 2)),
        ))
        if reading == Reading.MIRRORED:
            second = (ConstKind(ConstTag.MZV, pm + down(j + 2)),
                      ConstKind(ConstTag.XI, pa + ks[:j] + (kk(j + 1) - 1,), 2))
        else:
            second = (ConstKind(ConstTag.MZV, pa + ks[:j]),
                      ConstKind(ConstTag.XI, pm + down(j + 2) + (kk(j + 1) - 1,), 2))
        terms.append(Term(-sign, second))
    return lhs, Expr(terms)


def xu_2_8_symbolic_check(a: int, b: int) -> bool:
    """
    The single-block functional equation, read with z and 1-z exchanged,
    agrees term by term with the direct expansion of Li({1}^{a-1}, b+1; z).
    """
    lhs, rhs = xu_2_8(a, b)
    main_lhs, main_rhs = thm_main2(ones(a - 1) + (b + 1,))
    return lhs.swap_args().equals(main_lhs) and rhs.swap_args().equals(main_rhs)


def check_weights(identity: Identity) -> bool:
    """Every term on both sides has the same total weight."""
    lhs, rhs = identity
    return len(set(lhs.weights()) | set(rhs.weights())) <= 1
