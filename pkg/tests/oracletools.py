"""Independent brute-force oracles used by the test suite.

Everything here recomputes values through a different route than the
package: explicit digit loops, cylinder enumeration, structural tree
walks. Shared helpers live in this module so the acceptance tests and
the unit tests freeze against the same independent code.
"""

from fractions import Fraction

F = Fraction
THIRD = F(1, 3)


def spongy_series_measure(rate: Fraction) -> Fraction:
    """Sum the defining series of the graft family with rate <= 1/3.

    Runs its own greedy base-4 digit loop on the rate: digits are 1 up
    to the first 0 at position h, the pieces from h on carry the shifted
    digit tail, whose exact value is the loop's remainder state. The
    closed pieces sum to (geometric head) + remainder/4^h.
    """
    if not (0 <= rate <= THIRD):
        raise ValueError(rate)
    if rate == THIRD:
        return THIRD
    x = rate
    h = 0
    while True:
        h += 1
        scaled = 4 * x
        digit = int(scaled)
        x = scaled - digit
        if digit == 0:
            break
        assert digit == 1, "values below 1/3 start with base-4 digits 1...10"
    head = (F(1) - F(1, 4 ** (h - 1))) / 3
    return head + x / 4**h


def spongy_digit_pieces(rate: Fraction, count: int) -> list[Fraction]:
    """First piece measures of the graft family, by an independent loop."""
    if rate == THIRD:
        return [F(1)] * count
    digits = []
    x = rate
    for _ in range(count + 1):
        scaled = 4 * x
        d = int(scaled)
        digits.append(d)
        x = scaled - d
    h = digits.index(0) + 1
    out = []
    for n in range(1, count + 1):
        out.append(F(1) if n < h else F(digits[n], 4))
    return out


def antichain_measure(words) -> Fraction:
    """Sum of cylinder masses; valid when the words are incomparable."""
    return sum((F(1, 2 ** len(w)) for w in words), F(0))


def points_at_depth(depth: int):
    """All binary words of the given length, as tuples."""
    for code in range(1 << depth):
        yield tuple((code >> (depth - 1 - i)) & 1 for i in range(depth))


def cylinder_local_measure(words, at, depth: int) -> Fraction:
    """Localized measure of a cylinder union by leaf counting at a depth.

    Enumerates every extension of ``at`` to the given total depth and
    counts those with a prefix in ``words``. Exact whenever depth
    reaches past the longest word.
    """
    assert depth >= max((len(w) for w in words), default=0)
    at = tuple(at)
    rest = depth - len(at)
    hits = 0
    for tail in points_at_depth(rest):
        full = at + tail
        if any(full[: len(w)] == tuple(w) for w in words):
            hits += 1
    return F(hits, 1 << rest)


def value_of_bits(bits) -> Fraction:
    return sum((F(b, 1 << (n + 1)) for n, b in enumerate(bits)), F(0))


def _offspring_cell(member, label_of, w) -> str:
    """Classify one cell of an offspring set: 'in', 'out' or 'unknown'.

    Independent of the package's state machine: tracks block boundaries
    by position arithmetic and tests copy membership against the
    left-aligned dyadic interval [0, label) instead of a cylinder
    normal form.
    """
    pos = 0
    node = ()
    order = 0
    while True:
        size = order + 1
        if pos + size > len(w):
            return "unknown"
        block = w[pos : pos + size]
        if all(b == block[0] for b in block):
            node = node + (block[0],)
            if not member(node):
                return "out"
            pos += size
            order += 1
            continue
        rest = w[pos + size :]
        label = label_of(node)
        left = value_of_bits(rest)
        right = left + F(1, 1 << len(rest))
        if right <= label:
            return "in"
        if left >= label:
            return "out"
        return "unknown"


def offspring_cell_bounds(member, label_of, word, depth: int):
    """Mass bounds of an offspring set inside a cylinder, cell by cell."""
    word = tuple(word)
    rest = depth - len(word)
    lo_cells = 0
    hi_cells = 0
    for tail in points_at_depth(rest):
        verdict = _offspring_cell(member, label_of, word + tail)
        if verdict == "in":
            lo_cells += 1
            hi_cells += 1
        elif verdict == "unknown":
            hi_cells += 1
    return F(lo_cells, 1 << rest), F(hi_cells, 1 << rest)
