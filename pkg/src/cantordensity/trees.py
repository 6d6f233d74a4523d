"""Tree presentations: explicit finitely-described trees and lazy joins.

A presentation answers membership questions about an infinite pruned
tree from a finite description: an explicit downward-closed node set
whose frontier leaves carry *policies* describing everything below.

Policies on binary (or any finite-alphabet) trees:

* ``zeros``         only the all-zeros continuation survives
* ``full``          the complete subtree is present
* ``periodic(q)``   exactly the continuation cycling through q survives

Trees over the natural-number alphabet (used as inputs to ``star``) may
also use:

* ``stop``          the leaf is terminal, nothing below
* ``fan_stop``      every one-letter extension is present and terminal

With ``stop``/``fan_stop`` the tree is no longer pruned; the binary
image produced by ``star`` restores pruned-ness by closing finite
maximal nodes with zero-tails.

Depth-bounded operators (``explode``, ``star``, ``section``) are exact
up to their requested depth and census-faithful where the module
contract asks for it; they cannot certify perfect-set containment,
only membership and branch-census facts about the presented class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Literal, Union

from .words import Word, deinterleave, runs_to_bits

Policy = Union[Literal["zeros", "full", "stop", "fan_stop"], tuple[Literal["periodic"], Word]]

CONTINUUM = "continuum"


def periodic(cycle: Word) -> Policy:
    if not cycle:
        raise ValueError("periodic policy needs a non-empty cycle")
    return ("periodic", tuple(cycle))


class ExplicitTree:
    """A pruned tree given by explicit nodes plus frontier policies.

    ``arity`` is the alphabet size, or None for the natural numbers.
    """

    def __init__(
        self,
        nodes: list[Word] | tuple[Word, ...] | set[Word],
        policies: dict[Word, Policy],
        arity: int | None = 2,
    ) -> None:
        node_set = {tuple(w) for w in nodes}
        node_set.add(())
        for w in node_set:
            if w and w[:-1] not in node_set:
                raise ValueError(f"nodes not downward closed at {w}")
            if arity is not None and any(l >= arity or l < 0 for l in w):
                raise ValueError(f"letter out of alphabet in node {w}")
        self.arity = arity
        self.nodes = frozenset(node_set)
        self.policies = {tuple(k): _check_policy(v, arity, k) for k, v in policies.items()}
        self._children: dict[Word, list[int]] = {w: [] for w in node_set}
        for w in node_set:
            if w:
                self._children[w[:-1]].append(w[-1])
        for w in node_set:
            if w in self.policies:
                if self._children[w]:
                    raise ValueError(f"policy leaf {w} has explicit children")
            elif not self._children[w]:
                raise ValueError(f"leaf {w} has no policy")

    @staticmethod
    def full_binary() -> "ExplicitTree":
        return ExplicitTree([()], {(): "full"}, arity=2)

    @staticmethod
    def full_nat() -> "ExplicitTree":
        return ExplicitTree([()], {(): "full"}, arity=None)

    @staticmethod
    def single_branch(head: Word, cycle: Word, arity: int | None = 2) -> "ExplicitTree":
        nodes = [head[:i] for i in range(len(head) + 1)]
        return ExplicitTree(nodes, {tuple(head): periodic(cycle)}, arity=arity)

    def max_explicit_depth(self) -> int:
        return max(len(w) for w in self.nodes)

    def _governing(self, word: Word) -> tuple[Word, Policy] | None:
        """The policy leaf whose region a non-explicit word falls under."""
        for cut in range(len(word), -1, -1):
            prefix = word[:cut]
            if prefix in self.policies:
                return prefix, self.policies[prefix]
            if prefix in self.nodes:
                return None
        return None

    def member(self, word: Word) -> bool:
        word = tuple(word)
        if self.arity is not None and any(l >= self.arity or l < 0 for l in word):
            return False
        if word in self.nodes:
            return True
        found = self._governing(word)
        if found is None:
            return False
        leaf, policy = found
        return _policy_accepts(policy, word[len(leaf):])

    def region_key(self, word: Word) -> tuple:
        """A key identifying the shape of the subtree below an alive word.

        Subtrees inside a policy region look alike regardless of where
        the word sits, which is what makes deep evaluations cacheable.
        """
        word = tuple(word)
        if word in self.nodes:
            if word in self.policies:
                return _policy_key(self.policies[word], 0)
            return ("node", word)
        found = self._governing(word)
        if found is None:
            return ("dead",)
        leaf, policy = found
        suffix = word[len(leaf):]
        if not _policy_accepts(policy, suffix):
            return ("dead",)
        return _policy_key(policy, len(suffix))

    def alive_children(self, word: Word) -> tuple[int, ...]:
        if self.arity is None:
            raise ValueError("cannot enumerate children over the natural numbers")
        return tuple(i for i in range(self.arity) if self.member(tuple(word) + (i,)))

    def members_at(self, depth: int) -> Iterator[Word]:
        """All alive words of exactly the given length (finite arity only)."""
        if self.arity is None:
            raise ValueError("cannot enumerate levels over the natural numbers")
        frontier = [()]
        for _ in range(depth):
            frontier = [
                w + (i,) for w in frontier for i in range(self.arity) if self.member(w + (i,))
            ]
        return iter(frontier)

    def accepts_branch(self, head: Word, cycle: Word) -> bool:
        """Exact membership of the eventually periodic branch head + cycle^w."""
        if not cycle:
            raise ValueError("cycle must be non-empty")

        def at(n: int) -> int:
            return head[n] if n < len(head) else cycle[(n - len(head)) % len(cycle)]

        # A prefix one deeper than the explicit region is policy-governed.
        probe = self.max_explicit_depth()
        prefix = tuple(at(n) for n in range(probe + 1))
        if not self.member(prefix):
            return False
        governed = self._governing(prefix)
        assert governed is not None
        leaf, policy = governed
        return _policy_accepts_branch(policy, leaf, head, cycle, at)

    def census(self) -> int | str:
        """How many branches carry infinitely many 1s (finite arity only).

        Returns the exact count or the string "continuum". Every branch
        of the presented tree eventually follows a single policy leaf,
        and distinct leaves are incomparable, so counting is local.
        """
        if self.arity is None:
            raise ValueError("census is for finite-arity presentations")
        total = 0
        for leaf, policy in self.policies.items():
            if policy == "full":
                return CONTINUUM
            if isinstance(policy, tuple) and policy[0] == "periodic":
                if any(l == 1 for l in policy[1]):
                    total += 1
            if policy in ("stop", "fan_stop"):
                raise ValueError("census needs a pruned presentation")
        return total


def _check_policy(policy: Policy, arity: int | None, at: Word) -> Policy:
    if policy in ("zeros", "full"):
        return policy
    if policy in ("stop", "fan_stop"):
        if arity is not None:
            raise ValueError(f"policy {policy} at {at} needs the natural-number alphabet")
        return policy
    if isinstance(policy, tuple) and len(policy) == 2 and policy[0] == "periodic":
        cycle = tuple(policy[1])
        if not cycle:
            raise ValueError(f"empty cycle at {at}")
        if arity is not None and any(l >= arity or l < 0 for l in cycle):
            raise ValueError(f"cycle letter out of alphabet at {at}")
        return ("periodic", cycle)
    raise ValueError(f"unknown policy {policy!r} at {at}")


def _policy_accepts(policy: Policy, suffix: Word) -> bool:
    if policy == "zeros":
        return all(l == 0 for l in suffix)
    if policy == "full":
        return True
    if policy == "stop":
        return len(suffix) == 0
    if policy == "fan_stop":
        return len(suffix) <= 1
    cycle = policy[1]
    return all(l == cycle[i % len(cycle)] for i, l in enumerate(suffix))


def _policy_key(policy: Policy, offset: int) -> tuple:
    if policy == "zeros":
        return ("zeros",)
    if policy == "full":
        return ("full",)
    if policy == "stop":
        return ("dead",)
    if policy == "fan_stop":
        return ("fan_stop",) if offset == 0 else ("dead",)
    cycle = policy[1]
    return ("periodic", cycle, offset % len(cycle))


def _policy_accepts_branch(policy, leaf: Word, head: Word, cycle: Word, at) -> bool:
    """Exact tail check of an eventually periodic branch against one policy."""
    start = len(leaf)
    if policy == "full":
        return True
    if policy in ("stop", "fan_stop"):
        return False
    if policy == "zeros":
        horizon = len(head) + len(cycle)
        return all(at(n) == 0 for n in range(start, max(start, horizon))) and all(
            l == 0 for l in cycle
        )
    q = policy[1]
    period = len(cycle) * len(q) // gcd(len(cycle), len(q))
    horizon = max(start, len(head)) + period
    return all(at(n) == q[(n - start) % len(q)] for n in range(start, horizon))


class InterleaveTree:
    """Lazy join: letters at even slots come from one tree, odd slots from the other.

    Membership is exact at every depth, which a depth-bounded
    materialization could not give.
    """

    def __init__(self, evens: ExplicitTree, odds: ExplicitTree):
        if evens.arity != 2 or odds.arity != 2:
            raise ValueError("interleave joins binary presentations")
        self.evens = evens
        self.odds = odds
        self.arity = 2

    def member(self, word: Word) -> bool:
        e, o = deinterleave(tuple(word))
        return self.evens.member(e) and self.odds.member(o)

    def region_key(self, word: Word) -> tuple:
        word = tuple(word)
        e, o = deinterleave(word)
        ke = self.evens.region_key(e)
        ko = self.odds.region_key(o)
        if ke == ("dead",) or ko == ("dead",):
            return ("dead",)
        return ("join", ke, ko, len(word) % 2)

    def alive_children(self, word: Word) -> tuple[int, ...]:
        return tuple(i for i in (0, 1) if self.member(tuple(word) + (i,)))

    def accepts_branch(self, head: Word, cycle: Word) -> bool:
        head, cycle = tuple(head), tuple(cycle)
        # Align the head on an even boundary, then split by slot parity;
        # doubling the cycle makes both projections periodic again.
        if len(head) % 2:
            head = head + cycle[:1]
            cycle = cycle[1:] + cycle[:1]
        if len(cycle) % 2:
            cycle = cycle * 2
        return self.evens.accepts_branch(head[0::2], cycle[0::2]) and self.odds.accepts_branch(
            head[1::2], cycle[1::2]
        )


class IntersectionTree:
    """Nodes alive in both presentations; used to prune one tree by another."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.arity = 2

    def member(self, word: Word) -> bool:
        return self.left.member(word) and self.right.member(word)

    def region_key(self, word: Word) -> tuple:
        kl = self.left.region_key(word)
        kr = self.right.region_key(word)
        if kl == ("dead",) or kr == ("dead",):
            return ("dead",)
        return ("meet", kl, kr)

    def accepts_branch(self, head: Word, cycle: Word) -> bool:
        return self.left.accepts_branch(head, cycle) and self.right.accepts_branch(head, cycle)

    def alive_children(self, word: Word) -> tuple[int, ...]:
        return tuple(i for i in (0, 1) if self.member(tuple(word) + (i,)))


def explode(tree: ExplicitTree, depth: int) -> ExplicitTree:
    """Materialize a finite-arity presentation to a depth, zeros beyond.

    Membership agrees with the input on all words up to ``depth``. The
    completion below the frontier is the zero-tail, so a presentation
    with no surviving 1-heavy branches explodes to one with none either.
    """
    if tree.arity is None:
        raise ValueError("explode needs a finite alphabet")
    nodes: list[Word] = [()]
    policies: dict[Word, Policy] = {}
    frontier = [()]
    for level in range(depth):
        nxt = []
        for w in frontier:
            for i in tree.alive_children(w):
                nxt.append(w + (i,))
        nodes.extend(nxt)
        frontier = nxt
    for w in frontier:
        policies[w] = "zeros"
    return ExplicitTree(nodes, policies, arity=tree.arity)


def star(tree: ExplicitTree, depth: int) -> ExplicitTree:
    """Binary image of a natural-number tree under the run-length codec.

    A node (a0, ..., ak) contributes the binary prefix closure of
    ``0^a0 1 ... 0^ak 1``. Terminal leaves close with zero-tails; the
    policies of infinite regions map exactly: a zeros fan becomes the
    all-ones tail, a full fan becomes a full binary subtree, a periodic
    fan becomes the encoded cycle. Exact to the requested depth.
    """
    if tree.arity is not None:
        raise ValueError("star expects a tree on the natural numbers")
    nodes: set[Word] = {()}
    policies: dict[Word, Policy] = {}

    def add_chain(base: Word, letters: Word) -> Word:
        current = base
        for letter in letters:
            current = current + (letter,)
            if len(current) <= depth:
                nodes.add(current)
        return current

    def place(word: Word, policy: Policy) -> bool:
        if len(word) <= depth:
            policies[word] = policy
            return True
        return False

    def walk(u: Word, encoded: Word) -> None:
        if len(encoded) > depth:
            return
        if u in tree.policies:
            policy = tree.policies[u]
            if policy == "stop":
                place(encoded, "zeros")
            elif policy == "zeros":
                place(encoded, periodic((1,)))
            elif policy == "full":
                place(encoded, "full")
            elif policy == "fan_stop":
                limit = depth - len(encoded)
                chain = encoded
                for k in range(limit + 1):
                    exit_word = chain + (1,)
                    if len(exit_word) <= depth:
                        nodes.add(exit_word)
                        place(exit_word, "zeros")
                    nxt = chain + (0,)
                    if len(nxt) <= depth:
                        nodes.add(nxt)
                        chain = nxt
                    else:
                        break
            else:
                place(encoded, periodic(runs_to_bits(policy[1])))
            return
        for k in sorted(tree._children[u]):
            end = add_chain(encoded, (0,) * k + (1,))
            walk(u + (k,), end)

    walk((), ())
    # Frontier nodes truncated mid-way get the zero-tail completion.
    all_nodes = set(nodes)
    for w in list(all_nodes):
        has_child = any(w + (i,) in all_nodes for i in (0, 1))
        if not has_child and w not in policies:
            policies[w] = "zeros"
    return ExplicitTree(sorted(all_nodes), policies, arity=2)


def section(product_tree: ExplicitTree, first_coordinate, depth: int) -> ExplicitTree:
    """The slice of a product-alphabet tree along a fixed first coordinate.

    A product letter packs a leading bit with a remainder letter as
    bit * (arity/2) + rest, so sectioning a pair tree (arity 4) yields
    a binary tree and sectioning a triple tree (arity 8) a pair tree.
    ``first_coordinate`` is anything with an ``at(n)`` method giving the
    leading bit at position n. A word v of length up to ``depth``
    survives when the zipped product word is alive; nodes with no
    continuation inside the window are discarded (lookahead pruning),
    so the result is pruned as a finite presentation. Frontier leaves
    close with zero-tails.
    """
    arity = product_tree.arity
    if arity is None or arity < 4 or arity & (arity - 1):
        raise ValueError("section expects a product alphabet: arity a power of two, at least 4")
    half = arity // 2
    alive: list[set[Word]] = [set() for _ in range(depth + 1)]
    alive[0].add(())

    def zipped(v: Word) -> Word:
        return tuple(half * first_coordinate.at(i) + v[i] for i in range(len(v)))

    for level in range(depth):
        for v in alive[level]:
            for b in range(half):
                child = v + (b,)
                if product_tree.member(zipped(child)):
                    alive[level + 1].add(child)
    # Lookahead: drop words that die before reaching the window's edge.
    for level in range(depth - 1, -1, -1):
        alive[level] = {
            v
            for v in alive[level]
            if any(v + (b,) in alive[level + 1] for b in range(half))
        }
    alive[0].add(())
    kept: list[Word] = []
    policies: dict[Word, Policy] = {}
    for level in range(depth + 1):
        kept.extend(alive[level])
    kept_set = set(kept)
    for v in kept:
        if not any(v + (b,) in kept_set for b in range(half)):
            policies[v] = "zeros"
    return ExplicitTree(kept, policies, arity=half)


def pair_letter(a: int, b: int) -> int:
    return 2 * a + b


def census_N(tree: ExplicitTree) -> int | str:
    """Exact cardinality class of the branches with infinitely many 1s."""
    return tree.census()


def graft(left: ExplicitTree, right: ExplicitTree) -> ExplicitTree:
    """The tree whose 0-subtree is ``left`` and 1-subtree is ``right``."""
    if left.arity != 2 or right.arity != 2:
        raise ValueError("graft is for binary presentations")
    nodes: list[Word] = [()]
    policies: dict[Word, Policy] = {}
    for letter, part in ((0, left), (1, right)):
        nodes.extend((letter,) + w for w in part.nodes)
        for leaf, policy in part.policies.items():
            policies[(letter,) + leaf] = policy
    return ExplicitTree(nodes, policies, arity=2)


def tree_interleave(evens: ExplicitTree, odds: ExplicitTree) -> InterleaveTree:
    """The join tree: even slots walk ``evens``, odd slots walk ``odds``."""
    return InterleaveTree(evens, odds)


def level_stat(tree: ExplicitTree, depth: int) -> Fraction:
    """Share of level-``depth`` words alive, computed per policy region.

    Zero-tail and periodic regions contribute one word per level, full
    regions a whole subtree; nothing is enumerated.
    """
    if tree.arity != 2:
        raise ValueError("level_stat is for binary presentations")
    count = 0
    for w in tree.nodes:
        if len(w) == depth:
            count += 1
    for leaf, policy in tree.policies.items():
        gap = depth - len(leaf)
        if gap <= 0:
            continue
        if policy == "full":
            count += 1 << gap
        elif policy == "zeros" or (isinstance(policy, tuple) and policy[0] == "periodic"):
            count += 1
    return Fraction(count, 1 << depth)
