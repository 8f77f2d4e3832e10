"""
Hoffman algebra services

Words over the two letters e0, e1 are stored in their canonical text form,
a str over the characters '0' and '1' read left to right ("110" is
e1 e1 e0). The empty string is the empty word. Rational combinations of
words are WordSum instances with exact Fraction coefficients.
"""

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from ..core.interfaces import NotInH0, NotInH1, ParseError
from .index_core import Index, check_positive

E0 = "0"
E1 = "1"

Word = str
Coefficient = Union[int, Fraction]


def check_word(text: str) -> Word:
    """Validate canonical word text, returning it stripped."""
    word = text.strip()
    if any(letter not in (E0, E1) for letter in word):
        raise ParseError(f"Word may only contain '0' and '1': {text!r}")
    return word


def index_to_word(k: Sequence[int]) -> Word:
    """e1 e0^{k1-1} ... e1 e0^{kr-1}; the empty index maps to the empty word."""
    return "".join(E1 + E0 * (entry - 1) for entry in check_positive(k))


def word_to_index(w: Word) -> Index:
    """
    Inverse of index_to_word.

    Raises:
        NotInH1: if w is non-empty and starts with e0
    """
    if not w:
        return ()
    if w[0] != E1:
        raise NotInH1(f"Word {w!r} does not start with e1")
    entries = []
    for letter in w:
        if letter == E1:
            entries.append(1)
        else:
            entries[-1] += 1
    return tuple(entries)


def in_h1(w: Word) -> bool:
    return not w or w[0] == E1


def in_h0(w: Word) -> bool:
    return not w or (w[0] == E1 and w[-1] == E0)


def word_dual(w: Word) -> Word:
    """
    Reverse the word and swap e0 <-> e1.

    Raises:
        NotInH0: if w is not empty and not of the form e1 ... e0
    """
    if not in_h0(w):
        raise NotInH0(f"Word {w!r} is not in h0")
    swap = {E0: E1, E1: E0}
    return "".join(swap[letter] for letter in reversed(w))


@lru_cache(maxsize=65536)
def _shuffle_words(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    result: Dict[Word, int] = {}
    for word, count in _shuffle_words(u[1:], v):
        key = u[0] + word
        result[key] = result.get(key, 0) + count
    for word, count in _shuffle_words(u, v[1:]):
        key = v[0] + word
        result[key] = result.get(key, 0) + count
    return tuple(sorted(result.items()))


class WordSum:
    """
    Finite rational combination of words.

    The stored map never contains zero coefficients, so two WordSums are
    equal iff their maps are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Coefficient]] = None):
        cleaned: Dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            value = Fraction(coeff)
            if value:
                cleaned[word] = cleaned.get(word, Fraction(0)) + value
        self._terms = {w: c for w, c in cleaned.items() if c}

    @classmethod
    def of(cls, word: Word, coeff: Coefficient = 1) -> "WordSum":
        return cls({word: coeff})

    @classmethod
    def one(cls) -> "WordSum":
        return cls({"": 1})

    @property
    def terms(self) -> Dict[Word, Fraction]:
        return dict(self._terms)

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(word, Fraction(0))

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WordSum):
            return self._terms == other._terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "WordSum") -> "WordSum":
        merged = dict(self._terms)
        for word, coeff in other._terms.items():
            merged[word] = merged.get(word, Fraction(0)) + coeff
        return WordSum(merged)

    def __neg__(self) -> "WordSum":
        return WordSum({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + (-other)

    def __mul__(self, scalar: Coefficient) -> "WordSum":
        if not isinstance(scalar, Rational):
            return NotImplemented
        return WordSum({w: c * scalar for w, c in self._terms.items()})

    __rmul__ = __mul__

    def shuffle(self, other: "WordSum") -> "WordSum":
        """Bilinear extension of the shuffle product."""
        result: Dict[Word, Fraction] = {}
        for u, cu in self._terms.items():
            for v, cv in other._terms.items():
                for word, count in _shuffle_words(u, v):
                    result[word] = result.get(word, Fraction(0)) + cu * cv * count
        return WordSum(result)

    def map_words(self, fn: Callable[[Word], Word]) -> "WordSum":
        """Apply a word-to-word map termwise."""
        result: Dict[Word, Fraction] = {}
        for word, coeff in self._terms.items():
            image = fn(word)
            result[image] = result.get(image, Fraction(0)) + coeff
        return WordSum(result)

    def mass(self) -> Fraction:
        """Sum of all coefficients."""
        return sum(self._terms.values(), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def to_dict(self) -> Dict[str, str]:
        """JSON form: word -> "p/q" (or "p" for integers)."""
        return {word: str(coeff) for word, coeff in self}

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> "WordSum":
        try:
            return cls({check_word(w): Fraction(c) for w, c in data.items()})
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Invalid word sum: {e}") from e

    def __repr__(self) -> str:
        if not self._terms:
            return "WordSum(0)"
        parts = [f"{c}*{w or '1'}" for w, c in self]
        return "WordSum(" + " + ".join(parts) + ")"


def shuffle(u: Union[Word, WordSum], v: Union[Word, WordSum]) -> WordSum:
    """Shuffle product of two words or word sums."""
    left = u if isinstance(u, WordSum) else WordSum.of(u)
    right = v if isinstance(v, WordSum) else WordSum.of(v)
    return left.shuffle(right)
