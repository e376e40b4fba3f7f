"""Reduced words in the rank-g free group and boundary cylinder combinatorics.

Letters are encoded as integers ``0 .. 2g-1``: letter ``2i`` is the generator
``a_{i+1}`` and ``2i + 1`` is its inverse, so ``x ^ 1`` inverts a letter and
the integer order realizes the lexicographic order a1 < a1^-1 < a2 < ... used
for deterministic basis construction.  Words are tuples of letters with no
adjacent cancelling pair.  Cylinder masses follow the uniform boundary
measure on the (2g)-regular tree: mu(cyl(w)) = (1/2g) * (2g-1)^(1-|w|).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

Word = tuple[int, ...]


def inverse_letter(x: int) -> int:
    return x ^ 1


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i + 1] != w[i] ^ 1 for i in range(len(w) - 1))


def inverse_word(w: Word) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


def concat(u: Word, v: Word) -> Word:
    """Product of two reduced words, cancelling at the seam."""
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == v[j] ^ 1:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def common_prefix_len(u: Sequence[int], v: Sequence[int]) -> int:
    k = 0
    for x, y in zip(u, v):
        if x != y:
            break
        k += 1
    return k


def iter_reduced_words(g: int, length: int) -> Iterator[Word]:
    """Yield all reduced words of the given length in lexicographic order."""
    if length == 0:
        yield ()
        return

    def extend(w: Word, remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield w
            return
        last_inv = w[-1] ^ 1 if w else -1
        for x in range(2 * g):
            if x != last_inv:
                yield from extend(w + (x,), remaining - 1)

    yield from extend((), length)


def reduced_words(g: int, length: int) -> list[Word]:
    return list(iter_reduced_words(g, length))


def word_count(g: int, length: int) -> int:
    """Number of reduced words of the given length: 2g(2g-1)^(n-1) for n >= 1."""
    if length == 0:
        return 1
    return 2 * g * (2 * g - 1) ** (length - 1)


def cylinder_mass(w: Sequence[int], g: int) -> Fraction:
    """Exact uniform boundary mass of the cylinder of infinite words extending w."""
    if len(w) == 0:
        return Fraction(1)
    return Fraction(1, 2 * g) * Fraction(1, (2 * g - 1) ** (len(w) - 1))


def parse_word(text: str, g: int) -> Word:
    """Parse a word from letters a..z (generators) and A..Z (inverses).

    The empty string and ``"e"`` denote the identity.  Raises ``ValueError``
    on non-reduced input or letters beyond rank ``g``.
    """
    text = text.strip()
    if text in ("", "e"):
        return ()
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            idx = ord(ch) - ord("a")
            letters.append(2 * idx)
        elif "A" <= ch <= "Z":
            idx = ord(ch) - ord("A")
            letters.append(2 * idx + 1)
        else:
            raise ValueError(f"invalid letter {ch!r} in word {text!r}")
        if idx >= g:
            raise ValueError(f"letter {ch!r} exceeds rank g={g}")
    w = tuple(letters)
    if not is_reduced(w):
        raise ValueError(f"word {text!r} is not reduced")
    return w


def format_word(w: Word) -> str:
    if not w:
        return "e"
    return "".join(
        chr(ord("a") + x // 2) if x % 2 == 0 else chr(ord("A") + x // 2) for x in w
    )
