"""Finite words and the combinators the rest of the package is built from.

A word is a tuple of small non-negative ints. Binary words (entries in
{0, 1}) name basic clopen cylinders of Cantor space; words with arbitrary
natural-number entries are nodes of the Baire tree and get translated to
binary words through the run-length codec below.

The codec: a natural-number word ``(a0, a1, ..., ak)`` becomes the binary
word ``0^a0 1 0^a1 1 ... 0^ak 1``. Every binary word ending in 1 (and the
empty word) decodes uniquely; ``bits_to_runs`` is the left inverse.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

Word = tuple[int, ...]

EMPTY: Word = ()


def is_binary(word: Word) -> bool:
    return all(letter in (0, 1) for letter in word)


def parse_word(text: str) -> Word:
    """Turn a string of digits such as ``"0110"`` into a word.

    The empty string is the empty word. Digits beyond 1 are accepted so
    the same parser serves Baire-tree nodes written with single-digit
    entries; multi-digit entries must be built as tuples directly.
    """
    if not text.isdigit() and text != "":
        raise ValueError(f"not a word: {text!r}")
    return tuple(int(ch) for ch in text)


def format_word(word: Word) -> str:
    return "".join(str(letter) for letter in word)


def split_trailing_zeros(word: Word) -> tuple[Word, int]:
    """Split ``word`` as ``head + (0,) * count`` with head empty or ending in 1."""
    count = 0
    while count < len(word) and word[-1 - count] == 0:
        count += 1
    return word[: len(word) - count], count


def ones_count(word: Word) -> int:
    return sum(1 for letter in word if letter == 1)


def runs_to_bits(runs: Word) -> Word:
    """Encode a natural-number word as a binary word, one ``0^a 1`` block per entry."""
    out: list[int] = []
    for entry in runs:
        if entry < 0:
            raise ValueError("run lengths must be non-negative")
        out.extend([0] * entry)
        out.append(1)
    return tuple(out)


def bits_to_runs(bits: Word) -> Word:
    """Decode a binary word ending in 1 (or empty) back to run lengths.

    Raises ValueError off the codec's range, i.e. when the word has a
    trailing zero or a letter outside {0, 1}.
    """
    if not is_binary(bits):
        raise ValueError("codec range is binary words")
    if bits and bits[-1] != 1:
        raise ValueError("codec range is words ending in 1")
    runs: list[int] = []
    zeros = 0
    for letter in bits:
        if letter == 0:
            zeros += 1
        else:
            runs.append(zeros)
            zeros = 0
    return tuple(runs)


def decode_head(bits: Word) -> Word:
    """Decode the largest prefix of ``bits`` that the codec can produce.

    Trailing zeros are dropped first, so this is total on binary words;
    it agrees with ``bits_to_runs`` on the codec's range.
    """
    head, _ = split_trailing_zeros(bits)
    return bits_to_runs(head)


def interleave(evens: Word, odds: Word) -> Word:
    """Merge two words letter by letter, the first word supplying even slots.

    The first word must be the same length as the second or one longer.
    """
    if len(evens) not in (len(odds), len(odds) + 1):
        raise ValueError(
            f"cannot interleave lengths {len(evens)} and {len(odds)}"
        )
    out: list[int] = []
    for i, letter in enumerate(evens):
        out.append(letter)
        if i < len(odds):
            out.append(odds[i])
    return tuple(out)


def deinterleave(word: Word) -> tuple[Word, Word]:
    return word[0::2], word[1::2]


def splice_runs(bits: Word, runs: Word) -> Word:
    """Insert a block ``0^runs[i] 1`` after the i-th 1 of a binary word.

    Needs exactly one run entry per 1 in ``bits``. Equivalently: decode
    the head, interleave the run words, re-encode, restore the trailing
    zeros.  Example: splice_runs((0,1,0,0), (3,)) == (0,1,0,0,0,1,0,0).
    """
    head, zeros = split_trailing_zeros(bits)
    base = bits_to_runs(head)
    if len(base) != len(runs):
        raise ValueError(
            f"need {len(base)} run entries for this word, got {len(runs)}"
        )
    woven = interleave(base, runs)
    return runs_to_bits(woven) + (0,) * zeros


def triangular(order: int) -> int:
    """1 + 2 + ... + order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return order * (order + 1) // 2


def order_at_depth(depth: int) -> int:
    """Largest ``k`` with ``triangular(k) <= depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    k = 0
    while triangular(k + 1) <= depth:
        k += 1
    return k


def stretch(word: Word) -> Word:
    """Repeat the i-th letter i+1 times; the result has triangular(len) letters."""
    out: list[int] = []
    for i, letter in enumerate(word):
        out.extend([letter] * (i + 1))
    return tuple(out)


def stretch_prefix(word_letters: Iterator[int] | Word, depth: int) -> Word:
    """First ``depth`` letters of the stretched form of a (possibly long) word."""
    out: list[int] = []
    for i, letter in enumerate(word_letters):
        if len(out) >= depth:
            break
        take = min(i + 1, depth - len(out))
        out.extend([letter] * take)
    if len(out) < depth:
        raise ValueError("word too short for requested stretch depth")
    return tuple(out)


def mixed_blocks(order: int) -> tuple[Word, ...]:
    """All binary words of length order+1 containing both letters, in lex order.

    Empty for order 0: length-1 words are single letters.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order == 0:
        return ()
    out = []
    for block in product((0, 1), repeat=order + 1):
        if 0 in block and 1 in block:
            out.append(block)
    return tuple(out)


def all_binary_words(length: int) -> Iterator[Word]:
    return iter(product((0, 1), repeat=length))


def is_prefix(shorter: Word, longer: Word) -> bool:
    return longer[: len(shorter)] == shorter


# Combinatorial vocabulary used by downstream callers: the head/tail
# split, the check/hat codec between natural-number words and binary
# words, the splice product, flag alphabets, and the prefix form of the
# run-length embedding of Baire space into Cantor space (which encodes
# words the same way check does).
head_tail = split_trailing_zeros
encode_check = runs_to_bits
decode_hat = decode_head
ltimes = splice_runs
flags = mixed_blocks
baire_embed_prefix = runs_to_bits
