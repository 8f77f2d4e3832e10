"""
Index combinatorics

Exact operations on positive indices k = (k_1, ..., k_r) and non-negative
indices e = (e_1, ..., e_r), represented as plain tuples of ints. The empty
tuple is the empty index. Every function here is pure.

Block form writes an index as ({1}^{a_1-1}, b_1+1, ..., {1}^{a_n-1}, b_n+1)
with a_i >= 1, b_i >= 1 for i < n and b_n >= 0.
"""

from math import comb
from typing import Iterator, List, NamedTuple, Sequence, Tuple

from ..core.interfaces import (
    DepthMismatch, DomainError, EmptyIndex, NotAdmissible, ParseError, RangeError
)

Index = Tuple[int, ...]
NonNegIndex = Tuple[int, ...]


class Block(NamedTuple):
    """One ({1}^{a-1}, b+1) block"""
    a: int
    b: int


BlockForm = List[Block]


def parse_index(text: str) -> Index:
    """
    Parse the canonical index text form.

    Accepts "(1,2,3)", "1,2,3", "()" and "" (the last two are the empty index).
    Entries must be non-negative integers; callers that need positive
    entries check with `check_positive`.

    Raises:
        ParseError: if the text is not a comma separated integer list
    """
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return ()
    entries = []
    for part in body.split(","):
        part = part.strip()
        if not part or not part.lstrip("-").isdigit():
            raise ParseError(f"Malformed index: {text!r}")
        value = int(part)
        if value < 0:
            raise ParseError(f"Negative entry in index: {text!r}")
        entries.append(value)
    return tuple(entries)


def format_index(k: Sequence[int]) -> str:
    """Canonical text form, "(k1,k2,...)" and "()" for the empty index."""
    return "(" + ",".join(str(x) for x in k) + ")"


def check_positive(k: Sequence[int]) -> Index:
    """Return `k` as a tuple, raising DomainError if an entry is < 1."""
    k = tuple(k)
    if any(x < 1 for x in k):
        raise DomainError(f"Index {format_index(k)} has a non-positive entry")
    return k


def ones(d: int) -> Index:
    """The index {1}^d."""
    return (1,) * d


def weight(e: Sequence[int]) -> int:
    return sum(e)


def depth(e: Sequence[int]) -> int:
    return len(e)


def is_admissible(k: Sequence[int]) -> bool:
    """True iff k is empty or its last entry is >= 2."""
    return len(k) == 0 or k[-1] >= 2


def to_blocks(k: Sequence[int]) -> BlockForm:
    """
    Decompose a positive index into its blocks.

    Examples:
        (1,2)     -> [(2,1)]
        (2,1,1,3) -> [(1,1),(3,2)]
        (1)       -> [(1,0)]
    """
    blocks: BlockForm = []
    run = 0
    for entry in check_positive(k):
        if entry == 1:
            run += 1
        else:
            blocks.append(Block(run + 1, entry - 1))
            run = 0
    if run:
        blocks.append(Block(run, 0))
    return blocks


def from_blocks(blocks: Sequence[Tuple[int, int]]) -> Index:
    """
    Reassemble an index from (a_i, b_i) pairs.

    Raises:
        DomainError: if a_i < 1, b_i < 0, or an interior block has b_i = 0
    """
    entries: List[int] = []
    last = len(blocks) - 1
    for i, (a, b) in enumerate(blocks):
        if a < 1 or b < 0 or (b == 0 and i != last):
            raise DomainError(f"Invalid block ({a},{b}) at position {i + 1}")
        entries.extend([1] * (a - 1))
        entries.append(b + 1)
    return tuple(entries)


def k_minus(k: Sequence[int]) -> Index:
    """Decrement the last entry, dropping it when it is 1."""
    if not k:
        raise EmptyIndex("k_minus of the empty index")
    k = tuple(k)
    if k[-1] >= 2:
        return k[:-1] + (k[-1] - 1,)
    return k[:-1]


def e_plus(e: Sequence[int]) -> NonNegIndex:
    """Increment the last entry."""
    if not e:
        raise EmptyIndex("e_plus of the empty index")
    e = tuple(e)
    return e[:-1] + (e[-1] + 1,)


def add(k: Sequence[int], e: Sequence[int]) -> Index:
    """Component-wise sum of two indices of equal depth."""
    if len(k) != len(e):
        raise DepthMismatch(f"Depths differ: {format_index(k)} vs {format_index(e)}")
    return tuple(x + y for x, y in zip(k, e))


def binom_b(k: Sequence[int], e: Sequence[int]) -> int:
    """b(k;e) = prod C(k_i + e_i - 1, e_i); 1 for depth 0."""
    if len(k) != len(e):
        raise DepthMismatch(f"Depths differ: {format_index(k)} vs {format_index(e)}")
    result = 1
    for ki, ei in zip(k, e):
        result *= comb(ki + ei - 1, ei)
    return result


def dual(k: Sequence[int]) -> Index:
    """
    Duality of admissible indices.

    Blocks [(a_1,b_1),...,(a_n,b_n)] map to [(b_n,a_n),...,(b_1,a_1)].

    Raises:
        NotAdmissible: if k is not admissible
    """
    if not is_admissible(k):
        raise NotAdmissible(f"{format_index(k)} is not admissible")
    blocks = to_blocks(k)
    return from_blocks([(b, a) for a, b in reversed(blocks)])


def hoffman_dual(k: Sequence[int]) -> Index:
    """
    Hoffman's dual: write k as runs of ones separated by commas, then
    exchange commas and plus signs.

    A leading zero entry contributes an empty run, so (0)∨ = ∅ and
    (0, x, ...)∨ = (x, ...)∨. Zero entries elsewhere are rejected.

    Raises:
        EmptyIndex: if k is empty
        DomainError: on a zero entry that is not leading
    """
    if not k:
        raise EmptyIndex("Hoffman dual of the empty index")
    k = tuple(k)
    if k[0] == 0:
        rest = k[1:]
        return hoffman_dual(rest) if rest else ()
    check_positive(k)

    total = sum(k)
    commas = set()
    position = 0
    for entry in k[:-1]:
        position += entry
        commas.add(position)
    # separators sit between one number p and p+1, for p = 1 .. total-1
    swapped = [p for p in range(1, total) if p not in commas]
    result = []
    start = 0
    for p in swapped:
        result.append(p - start)
        start = p
    result.append(total - start)
    return tuple(result)


def block_slice(k: Sequence[int], i: int, j: int) -> Index:
    """
    k^i_j: blocks i+1..j reassembled.

    Raises:
        RangeError: unless 0 <= i <= j <= n
    """
    blocks = to_blocks(k)
    if not 0 <= i <= j <= len(blocks):
        raise RangeError(f"Slice ({i},{j}) outside 0..{len(blocks)} for {format_index(k)}")
    return from_blocks(blocks[i:j])


def tail(k: Sequence[int], i: int) -> Index:
    """k^i = k^i_n."""
    return block_slice(k, i, len(to_blocks(k)))


def head(k: Sequence[int], j: int) -> Index:
    """k_j = k^0_j."""
    return block_slice(k, 0, j)


def reverse_blocks(k: Sequence[int]) -> Index:
    """←k = (b_n+1, {1}^{a_n-1}, ..., b_1+1, {1}^{a_1-1})."""
    entries: List[int] = []
    for a, b in reversed(to_blocks(k)):
        entries.append(b + 1)
        entries.extend([1] * (a - 1))
    return tuple(entries)


def compositions(w: int, d: int) -> List[NonNegIndex]:
    """
    All non-negative indices of weight w and depth d, in colexicographic order.

    (2,2) -> [(2,0),(1,1),(0,2)]; (0,0) -> [()]; (w>0,0) -> []
    """
    if w < 0 or d < 0:
        return []
    if d == 0:
        return [()] if w == 0 else []
    result: List[NonNegIndex] = []
    for last in range(w + 1):
        for prefix in compositions(w - last, d - 1):
            result.append(prefix + (last,))
    return result


def positive_indices(w: int) -> Iterator[Index]:
    """Every positive index of weight exactly w (the empty index for w = 0)."""
    if w == 0:
        yield ()
        return
    for first in range(1, w + 1):
        for rest in positive_indices(w - first):
            yield (first,) + rest


def admissible_indices(w: int) -> Iterator[Index]:
    """Every non-empty admissible index of weight exactly w."""
    for k in positive_indices(w):
        if k and is_admissible(k):
            yield k
