"""Turn interval statistics into candidate default rules.

For a goal formula phi, every statistic about phi (or about its negation,
read through the complement) proposes "things in my reference class are
phi by default". When two reference classes overlap, the narrower class
should win where it speaks, so the wider rule may need the justification
"not known to be in the narrower class", and unrelated classes guard
against each other. The pairwise classification below works that out from
subset entailment (universal axioms only, never statistics) and from how
the two intervals sit relative to each other:

* shifted   - one interval at-or-below the other in both endpoints:
              both rules survive, the wider/other class gets a guard
* engulfing - the first interval contains the second: the first statistic
              is the less informative one and only feeds a guarded rule
              (or, for nested classes, no rule at all)
* engulfed  - mirror image of engulfing

Identical intervals count as shifted; that tie-break keeps classification
deterministic. After generation, rules whose source statistic has a lower
bound under 1 - delta are rejected: their class just is not reliable
enough to conclude phi at tolerance delta.

Case tags name the class relation (1 nested, 3 unrelated) and the
interval relation (a shifted, b engulfing, c engulfed). A nested pair is
always oriented with the narrower class first, so tag 2 (the mirror of 1)
never appears in output; "single" and "coextensive" mark the degenerate
one-statistic and provably-equal-class situations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .counting import entails_subset, feasible_cells
from .errors import NoStatsError, SchemaError
from .formulas import Atom, MonadicFormula, Not, fmt, negated, satisfies
from .kb import (
    DefaultRule,
    GeneratedOrigin,
    KnowledgeBase,
    StatStatement,
    name_rules,
)


@dataclass(frozen=True)
class CandidateSet:
    """Candidate rules for one goal formula, plus the audit trail."""

    target: MonadicFormula
    candidates: tuple[DefaultRule, ...]
    rejected: tuple[tuple[DefaultRule, str], ...] = ()
    warnings: tuple[str, ...] = ()


def _matching_stats(
    kb: KnowledgeBase, target: MonadicFormula
) -> list[StatStatement]:
    """Statistics about `target`, complementing where needed.

    A statistic whose target is the negation of `target` is reported
    through its complement, so the returned statements all share the
    goal as their target. Declaration order is preserved.
    """
    out = []
    for stat in kb.stats:
        if stat.target == target:
            out.append(stat)
        elif negated(stat.target) == target:
            out.append(stat.complement())
    return out


def _plain(target: MonadicFormula, stat: StatStatement, tag: str) -> DefaultRule:
    return DefaultRule(
        prerequisite=stat.reference,
        justifications=(target,),
        consequent=target,
        origin=GeneratedOrigin(tag, stat),
    )


def _guarded(
    target: MonadicFormula,
    stat: StatStatement,
    other: StatStatement,
    tag: str,
) -> DefaultRule:
    """Rule for `stat`'s class, blocked when the other class is known."""
    return DefaultRule(
        prerequisite=stat.reference,
        justifications=(negated(other.reference), target),
        consequent=target,
        origin=GeneratedOrigin(tag, stat, other),
    )


def _interval_shape(sub: StatStatement, sup: StatStatement) -> str:
    p, q = sub.lower, sub.upper
    pp, qq = sup.lower, sup.upper
    if (p <= pp and q <= qq) or (pp <= p and qq <= q):
        return "a"
    if p <= pp and qq <= q:
        return "b"
    return "c"  # pp <= p and q <= qq is all that is left


def _pair_rules(
    kb: KnowledgeBase,
    target: MonadicFormula,
    first: StatStatement,
    second: StatStatement,
) -> tuple[list[DefaultRule], list[str]]:
    """Apply the pairwise recipe; returns (rules, warnings)."""
    narrower = entails_subset(kb, first.reference, second.reference)
    wider = entails_subset(kb, second.reference, first.reference)
    if narrower and wider:
        keep = first if first.lower >= second.lower else second
        warn = (
            f"references {fmt(first.reference)} and {fmt(second.reference)} "
            "are provably coextensive; emitting one rule from the statistic "
            "with the stronger lower bound"
        )
        return [_plain(target, keep, "coextensive")], [warn]
    if narrower or wider:
        sub, sup = (first, second) if narrower else (second, first)
        shape = _interval_shape(sub, sup)
        if shape == "b":
            # A guarded sub-class rule would carry a justification the
            # prerequisite refutes, so only the wide class speaks.
            return [_plain(target, sup, "1b")], []
        return [
            _plain(target, sub, "1" + shape),
            _guarded(target, sup, sub, "1" + shape),
        ], []
    shape = _interval_shape(first, second)
    if shape == "a":
        return [
            _guarded(target, first, second, "3a"),
            _guarded(target, second, first, "3a"),
        ], []
    if shape == "b":
        return [
            _guarded(target, first, second, "3b"),
            _plain(target, second, "3b"),
        ], []
    return [
        _plain(target, first, "3c"),
        _guarded(target, second, first, "3c"),
    ], []


def generate_candidates(
    kb: KnowledgeBase, target: MonadicFormula
) -> CandidateSet:
    """All candidate rules concluding `target`, before the delta filter."""
    stats = _matching_stats(kb, target)
    if not stats:
        raise NoStatsError(
            f"no statistic speaks about {fmt(target)}, directly or by "
            "complement"
        )
    if len(stats) == 1:
        return CandidateSet(target, (_plain(target, stats[0], "single"),))
    rules: list[DefaultRule] = []
    seen = set()
    warnings: list[str] = []
    for i in range(len(stats)):
        for j in range(i + 1, len(stats)):
            pair_rules, pair_warnings = _pair_rules(
                kb, target, stats[i], stats[j]
            )
            warnings.extend(pair_warnings)
            for rule in pair_rules:
                if rule.key() not in seen:
                    seen.add(rule.key())
                    rules.append(rule)
    return CandidateSet(target, tuple(rules), warnings=tuple(warnings))


def filter_by_delta(cs: CandidateSet, delta: Fraction) -> CandidateSet:
    """Drop rules whose source statistic cannot promise 1 - delta."""
    kept = []
    rejected = list(cs.rejected)
    for rule in cs.candidates:
        low = rule.origin.primary.lower
        if low >= 1 - delta:
            kept.append(rule)
        else:
            rejected.append(
                (rule, f"source lower bound {low} < 1 - delta = {1 - delta}")
            )
    return replace(cs, candidates=tuple(kept), rejected=tuple(rejected))


def goal_formulas(kb: KnowledgeBase) -> tuple[MonadicFormula, ...]:
    """Every statistic's target and its negation, in declaration order."""
    goals: list[MonadicFormula] = []
    for stat in kb.stats:
        for goal in (stat.target, negated(stat.target)):
            if goal not in goals:
                goals.append(goal)
    return tuple(goals)


def compile_rules(
    kb: KnowledgeBase, delta: Fraction
) -> tuple[tuple[DefaultRule, ...], tuple[CandidateSet, ...]]:
    """Generate-and-filter across every goal the statistics speak about.

    Returns the deduplicated, named rule set alongside the per-goal
    candidate sets (kept for reporting).
    """
    sets = tuple(
        filter_by_delta(generate_candidates(kb, goal), delta)
        for goal in goal_formulas(kb)
    )
    rules: list[DefaultRule] = []
    seen = set()
    for cs in sets:
        for rule in cs.candidates:
            if rule.key() not in seen:
                seen.add(rule.key())
                rules.append(rule)
    return name_rules(rules), sets


def generate_lottery_defaults(
    kb: KnowledgeBase,
) -> tuple[tuple[DefaultRule, ...], Fraction]:
    """Exclusion rules for a lottery-shaped KB.

    The shape required: every statistic bounds one outcome predicate
    against one shared reference atom, and the axioms force reference
    elements into exactly one outcome (and outcomes into the reference).
    Returns one rule "reference : not outcome / not outcome" per outcome
    plus the smallest delta admitting them all (the largest upper bound).
    Raises SchemaError when the KB is not of that shape.
    """
    if not kb.stats:
        raise SchemaError("a lottery KB needs outcome statistics")
    references = {fmt(st.reference) for st in kb.stats}
    if len(references) != 1 or not isinstance(kb.stats[0].reference, Atom):
        raise SchemaError(
            "lottery statistics must share a single atomic reference class"
        )
    ref = kb.stats[0].reference
    outcomes = []
    for st in kb.stats:
        if not isinstance(st.target, Atom) or st.target == ref:
            raise SchemaError(
                f"lottery outcome {fmt(st.target)} must be an atom distinct "
                "from the reference"
            )
        if st.target in outcomes:
            raise SchemaError(f"outcome {fmt(st.target)} appears twice")
        outcomes.append(st.target)
    for cell in feasible_cells(kb):
        hits = sum(1 for o in outcomes if satisfies(o, cell))
        if satisfies(ref, cell) != (hits == 1) or hits > 1:
            raise SchemaError(
                "axioms must make the outcomes exclusive and exhaustive "
                "over the reference class"
            )
    rules = []
    for st in kb.stats:
        view = st.complement()
        rules.append(
            DefaultRule(
                prerequisite=ref,
                justifications=(Not(st.target),),
                consequent=Not(st.target),
                origin=GeneratedOrigin("single", view),
            )
        )
    delta_star = max(st.upper for st in kb.stats)
    return name_rules(rules), delta_star
