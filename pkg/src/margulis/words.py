"""Words in a free group of rank k.

A letter is a nonzero int: ``+i`` is generator ``g_i`` and ``-i`` its inverse
(1-based).  A word is a tuple of letters, read left to right as a product,
so ``(1, -2)`` is ``g1 g2^{-1}``.  Letters are ordered
``g1 < g1^{-1} < g2 < g2^{-1} < ...``, which fixes the canonical
representative of a conjugacy class as its lexicographically least cyclic
rotation.

For display, ``g1, g2, ...`` are ``a, b, ...`` and inverses are upper case.
"""

from __future__ import annotations

from typing import Iterator

Word = tuple[int, ...]

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


def letters(rank: int) -> list[int]:
    """All ``2 * rank`` letters in canonical order."""
    return sorted((s * i for i in range(1, rank + 1) for s in (1, -1)), key=letter_key)


def inverse(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def free_reduce(word) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(word: Word) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def is_cyclically_reduced(word: Word) -> bool:
    return is_reduced(word) and (len(word) < 2 or word[0] != -word[-1])


def cyclic_reduce(word) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def rotations(word: Word) -> list[Word]:
    return [word[i:] + word[:i] for i in range(len(word))] or [word]


def _keyed(word: Word) -> tuple[int, ...]:
    return tuple(letter_key(x) for x in word)


def canonical_rotation(word: Word) -> Word:
    return min(rotations(word), key=_keyed)


def canonical_class(word) -> Word:
    """Canonical representative of the conjugacy class of ``word``."""
    return canonical_rotation(cyclic_reduce(word))


def is_canonical(word: Word) -> bool:
    k = _keyed(word)
    n = len(k)
    return all(k <= k[i:] + k[:i] for i in range(1, n))


def primitive_root(word: Word) -> Word:
    """Shortest ``u`` with ``word == u^m`` (as sequences)."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def is_primitive(word: Word) -> bool:
    return len(primitive_root(word)) == len(word)


def reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All freely reduced words of exactly ``length`` letters, in lex order."""
    alphabet = letters(rank)
    if length == 0:
        yield ()
        return

    def extend(prefix: list[int]):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else 0
        for x in alphabet:
            if x != -last:
                prefix.append(x)
                yield from extend(prefix)
                prefix.pop()

    yield from extend([])


def enumerate_classes(rank: int, max_len: int) -> list[Word]:
    """One canonical cyclically reduced word per nontrivial conjugacy class.

    Words are listed by length, then lexicographically.  ``w`` and ``w^{-1}``
    are distinct classes.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    out: list[Word] = []
    for n in range(1, max_len + 1):
        for w in reduced_words(rank, n):
            if w[0] != -w[-1] and is_canonical(w):
                out.append(w)
    return out


def word_to_str(word: Word) -> str:
    if not word:
        return "1"
    return "".join(
        _ALPHABET[abs(x) - 1] if x > 0 else _ALPHABET[abs(x) - 1].upper() for x in word
    )


def word_from_str(text: str) -> Word:
    if text in ("", "1"):
        return ()
    out = []
    for ch in text:
        i = _ALPHABET.index(ch.lower()) + 1
        out.append(i if ch.islower() else -i)
    return tuple(out)


def letter_name(letter: int) -> str:
    return word_to_str((letter,))
