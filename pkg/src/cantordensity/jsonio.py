"""JSON documents in, oracles and records out.

Three document families, all small JSON objects:

* trees       {"nodes": ["", "0", "01"], "policies": {"01": "zeros"}}
* set specs   discriminated by "kind": clopen, dualistic,
              countable-range, offspring, reduction, compose,
              complement
* branches    discriminated by "kind": ev_periodic, stretch,
              interleave, baire

A malformed document raises SpecError: the document itself is at
fault. A well-formed document whose values break a construction's
premises raises whatever the construction raises (a ValueError with
the module's own message); the command line maps the two onto
different exit codes.

Conventions: rationals are reduced "p/q" strings; words are digit
strings ("" is the root), with integer arrays also accepted for
natural-number words; every record this module emits formats
rationals the same way.
"""

from __future__ import annotations

from fractions import Fraction

from .approx import (
    AffineImagePresentation,
    ConstantPresentation,
    InjectivePresentation,
)
from .branches import Branch, StretchedBranch, interleave_branches
from .clopen import ClopenSet
from .dualistic import dualistic_of_measure, solid_countable_range
from .dyadics import RatInterval, format_fraction, parse_fraction
from .offspring import ExplicitLabels, offspring_build
from .oracles import ComplementOracle, MeasureOracle, Verdict, compose, from_clopen
from .reductions import first_reduction, second_reduction, third_reduction
from .trees import ExplicitTree, Policy, periodic
from .words import Word, runs_to_bits


class SpecError(ValueError):
    """The JSON document itself is malformed."""


def _require(doc: dict, key: str):
    if key not in doc:
        raise SpecError(f"missing field {key!r}")
    return doc[key]


def _kind_of(doc, allowed: tuple[str, ...], key: str = "kind") -> str:
    if not isinstance(doc, dict):
        raise SpecError(f"expected an object carrying {key!r}, got {doc!r}")
    kind = doc.get(key)
    if kind not in allowed:
        raise SpecError(f"unknown {key} {kind!r}; expected one of: {', '.join(allowed)}")
    return kind


def fraction_from_spec(value) -> Fraction:
    if not isinstance(value, str):
        raise SpecError(f'expected a "p/q" string, got {value!r}')
    try:
        return parse_fraction(value)
    except ValueError as err:
        raise SpecError(str(err)) from None


def word_from_spec(value, what: str = "word") -> Word:
    if isinstance(value, str):
        if not all(c.isdigit() for c in value):
            raise SpecError(f"{what} must be a digit string, got {value!r}")
        return tuple(int(c) for c in value)
    if isinstance(value, list) and all(
        isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in value
    ):
        return tuple(value)
    raise SpecError(f"{what} must be a digit string or an array of non-negative integers")


def binary_word_from_spec(value, what: str = "word") -> Word:
    word = word_from_spec(value, what)
    if any(letter not in (0, 1) for letter in word):
        raise SpecError(f"{what} must be binary, got {value!r}")
    return word


def word_to_spec(word: Word) -> str:
    if any(letter > 9 for letter in word):
        raise SpecError(f"letters above 9 do not fit a digit string: {word}")
    return "".join(str(letter) for letter in word)


# ---------------------------------------------------------------- trees

_POLICY_NAMES = ("zeros", "full", "stop", "fan_stop")


def _policy_from_spec(value) -> Policy:
    if isinstance(value, str):
        if value not in _POLICY_NAMES:
            raise SpecError(f"unknown policy {value!r}; expected one of: {', '.join(_POLICY_NAMES)}")
        return value
    if isinstance(value, dict) and set(value) == {"periodic"}:
        cycle = word_from_spec(value["periodic"], "periodic cycle")
        if not cycle:
            raise SpecError("periodic policy needs a non-empty cycle")
        return periodic(cycle)
    raise SpecError(f'policy must be a name or {{"periodic": word}}, got {value!r}')


def tree_from_spec(doc) -> ExplicitTree:
    if not isinstance(doc, dict):
        raise SpecError(f"tree spec must be an object, got {doc!r}")
    raw_nodes = _require(doc, "nodes")
    if not isinstance(raw_nodes, list):
        raise SpecError('"nodes" must be an array of words')
    nodes = [word_from_spec(n, "tree node") for n in raw_nodes]
    raw_policies = doc.get("policies", {})
    if not isinstance(raw_policies, dict):
        raise SpecError('"policies" must be an object keyed by words')
    policies = {
        word_from_spec(key, "policy node"): _policy_from_spec(value)
        for key, value in raw_policies.items()
    }
    arity = doc.get("arity", 2)
    if arity is not None and (isinstance(arity, bool) or not isinstance(arity, int) or arity < 2):
        raise SpecError(f'"arity" must be null or an integer >= 2, got {arity!r}')
    try:
        return ExplicitTree(nodes, policies, arity=arity)
    except ValueError as err:
        # Structural defects of the node/policy table are the
        # document's fault, same as a syntax error.
        raise SpecError(str(err)) from None


def tree_to_spec(tree: ExplicitTree) -> dict:
    by_depth = sorted(tree.nodes, key=lambda w: (len(w), w))
    policies = {}
    for node in sorted(tree.policies, key=lambda w: (len(w), w)):
        policy = tree.policies[node]
        if isinstance(policy, tuple):
            policies[word_to_spec(node)] = {"periodic": word_to_spec(policy[1])}
        else:
            policies[word_to_spec(node)] = policy
    doc = {"nodes": [word_to_spec(w) for w in by_depth], "policies": policies}
    if tree.arity != 2:
        doc["arity"] = tree.arity
    return doc


# ------------------------------------------------------------- branches

_BRANCH_KINDS = ("ev_periodic", "stretch", "interleave", "baire")


def branch_from_spec(doc) -> Branch | StretchedBranch:
    kind = _kind_of(doc, _BRANCH_KINDS)
    if kind == "ev_periodic":
        head = binary_word_from_spec(doc.get("head", ""), "head")
        period = binary_word_from_spec(_require(doc, "period"), "period")
        if not period:
            raise SpecError("period must be non-empty")
        return Branch(head, period)
    if kind == "baire":
        head = word_from_spec(doc.get("head", []), "head")
        period = word_from_spec(_require(doc, "period"), "period")
        if not period:
            raise SpecError("period must be non-empty")
        return Branch(runs_to_bits(head), runs_to_bits(period))
    if kind == "stretch":
        inner = branch_from_spec(_require(doc, "of"))
        if isinstance(inner, StretchedBranch):
            raise ValueError("a stretched stream cannot be stretched again")
        return StretchedBranch(inner)
    x = branch_from_spec(_require(doc, "x"))
    y = branch_from_spec(_require(doc, "y"))
    if isinstance(x, StretchedBranch) or isinstance(y, StretchedBranch):
        raise ValueError("stretched streams cannot be interleaved")
    return interleave_branches(x, y)


# ------------------------------------------------------------ set specs

_SET_KINDS = (
    "clopen",
    "dualistic",
    "countable-range",
    "offspring",
    "reduction",
    "compose",
    "complement",
)

_PRESET_KINDS = ("constant", "interval", "injective")


def presentation_from_spec(doc):
    preset = _kind_of(doc, _PRESET_KINDS, key="preset")
    if preset == "constant":
        return ConstantPresentation(fraction_from_spec(_require(doc, "value")))
    if preset == "interval":
        return AffineImagePresentation(
            fraction_from_spec(_require(doc, "a")),
            fraction_from_spec(_require(doc, "b")),
        )
    return InjectivePresentation(fraction_from_spec(_require(doc, "eps")))


def oracle_from_spec(doc) -> MeasureOracle:
    kind = _kind_of(doc, _SET_KINDS)
    if kind == "clopen":
        raw = _require(doc, "words")
        if not isinstance(raw, list):
            raise SpecError('"words" must be an array')
        words = [binary_word_from_spec(w, "clopen word") for w in raw]
        return from_clopen(ClopenSet.from_words(words))
    if kind == "dualistic":
        return dualistic_of_measure(fraction_from_spec(_require(doc, "measure"))).oracle
    if kind == "countable-range":
        raw = _require(doc, "values")
        if not isinstance(raw, list):
            raise SpecError('"values" must be an array')
        return solid_countable_range([fraction_from_spec(v) for v in raw]).oracle
    if kind == "offspring":
        tree = tree_from_spec(_require(doc, "tree"))
        raw_labels = doc.get("labels", {})
        if not isinstance(raw_labels, dict):
            raise SpecError('"labels" must be an object keyed by words')
        mapping = {
            word_from_spec(key, "label node"): fraction_from_spec(value)
            for key, value in raw_labels.items()
        }
        default = fraction_from_spec(doc.get("default_label", "1/2"))
        variant = doc.get("variant", "closed")
        if variant not in ("closed", "open"):
            raise SpecError(f'"variant" must be "closed" or "open", got {variant!r}')
        return offspring_build(tree, ExplicitLabels(mapping, default), variant)
    if kind == "reduction":
        which = _kind_of(doc, ("first", "second", "third"), key="which")
        tree = tree_from_spec(doc["tree"]) if "tree" in doc else ExplicitTree.full_binary()
        if which == "second":
            return second_reduction(tree)
        presentation = presentation_from_spec(_require(doc, "function"))
        if which == "first":
            return first_reduction(presentation, tree)
        return third_reduction(presentation, tree)
    if kind == "compose":
        raw = _require(doc, "parts")
        if not isinstance(raw, list) or not raw:
            raise SpecError('"parts" must be a non-empty array')
        parts = []
        for entry in raw:
            if not isinstance(entry, dict):
                raise SpecError(f'each part is {{"prefix": word, "set": spec}}, got {entry!r}')
            prefix = binary_word_from_spec(_require(entry, "prefix"), "part prefix")
            parts.append((prefix, oracle_from_spec(_require(entry, "set"))))
        complemented = doc.get("complemented", False)
        if not isinstance(complemented, bool):
            raise SpecError('"complemented" must be a boolean')
        return compose(parts, complemented=complemented)
    inner = oracle_from_spec(_require(doc, "of"))
    return ComplementOracle(inner)


# -------------------------------------------------------- output records


def interval_record(interval: RatInterval) -> dict:
    return {"lo": format_fraction(interval.lo), "hi": format_fraction(interval.hi)}


def trace_record(n: int, interval: RatInterval) -> dict:
    return {"n": n, "lo": format_fraction(interval.lo), "hi": format_fraction(interval.hi)}


def verdict_record(verdict: Verdict) -> dict:
    record: dict = {"verdict": verdict.kind}
    if verdict.interval is not None:
        record["lo"] = format_fraction(verdict.interval.lo)
        record["hi"] = format_fraction(verdict.interval.hi)
    if verdict.delta is not None:
        record["delta"] = format_fraction(verdict.delta)
    record["depth"] = verdict.depth
    if verdict.detail:
        record["detail"] = verdict.detail
    return record
