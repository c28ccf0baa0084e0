"""Default-rule application: classic extensions, thresholded extensions,
and per-rule validity measurement.

Applicability of a ground rule is judged semantically against a world
state (background theory, statistics, evidence, accepted conclusions):
the prerequisite must be entailed, and no justification's negation may
be. Entailment goes through the exact model counter, so statistics take
part in blocking; there is no separate syntactic proof system.

Classic extensions are computed by a breadth-first walk over sets of
applied ground rules. Facts grow monotonically along any application
order, so a rule whose justifications survive the final state was
applicable at every earlier state too; it therefore suffices to add one
currently-applicable rule at a time and keep exactly the reachable sets
that are fixed points (the applied set coincides with the applicable set
of its own result). Duplicate conclusion sets arising from different
orders are reported once.

Thresholded extensions instead fire rules one at a time, each firing
conditional on the consequent holding in more than a 1 - epsilon_star
share of the models of the current state, so every accepted conclusion
shrinks the live model set and later rules face a stricter court.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .counting import DEFAULT_BUDGET, count_models, entails, proportion
from .errors import EmptyConditionError, EvidenceBoundError
from .formulas import ConstantSym, negated
from .kb import (
    DefaultRule,
    GroundFact,
    GroundLiteral,
    KnowledgeBase,
    WorldState,
)

DEFAULT_EVIDENCE_BOUND = 100_000


class Applicability(enum.Enum):
    APPLIES = "applies"
    NO_PREREQUISITE = "no_prerequisite"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class GroundRule:
    """A default rule instantiated at one constant."""

    rule: DefaultRule
    constant: ConstantSym

    def prerequisite_fact(self) -> GroundFact:
        return GroundFact(self.constant, self.rule.prerequisite)

    def consequent_fact(self) -> GroundFact:
        return GroundFact(self.constant, self.rule.consequent)

    def label(self) -> str:
        name = self.rule.name or str(self.rule)
        return f"{name}@{self.constant.name}"


@dataclass(frozen=True)
class TraceStep:
    """One firing: which ground rule, and the consequent's proportion in
    the world state it fired against."""

    ground_rule: GroundRule
    proportion: Fraction


@dataclass(frozen=True)
class Extension:
    """A finished run: accepted conclusions, how they were reached, and
    the share of models of the evidence that satisfy all of them."""

    conclusions: frozenset[GroundFact]
    trace: tuple[TraceStep, ...]
    final_proportion: Fraction
    mode: str


def applicable(
    gr: GroundRule, world: WorldState, budget: int = DEFAULT_BUDGET
) -> Applicability:
    """Trichotomy for one ground rule against one world state."""
    if not entails(world, gr.prerequisite_fact(), budget):
        return Applicability.NO_PREREQUISITE
    for beta in gr.rule.justifications:
        refutation = GroundFact(gr.constant, negated(beta))
        if entails(world, refutation, budget):
            return Applicability.BLOCKED
    return Applicability.APPLIES


def ground_rules(
    rules: Sequence[DefaultRule], constants: Sequence[ConstantSym]
) -> tuple[GroundRule, ...]:
    """Every rule at every constant, declaration order on both axes."""
    return tuple(GroundRule(r, c) for r in rules for c in constants)


def _require_consistent(world: WorldState, budget: int) -> None:
    if count_models(world, budget) == 0:
        raise EmptyConditionError(
            "evidence is inconsistent with the background theory"
        )


def _conclusion_sort_key(ext: Extension):
    return tuple(sorted(str(f) for f in ext.conclusions))


def extension_proportion(
    conclusions: frozenset[GroundFact],
    kb: KnowledgeBase,
    evidence: frozenset[GroundFact],
    budget: int = DEFAULT_BUDGET,
) -> Fraction:
    """Share of models of the evidence satisfying every conclusion."""
    base = WorldState(kb, evidence)
    denom = count_models(base, budget)
    if denom == 0:
        raise EmptyConditionError(
            "no models satisfy the evidence, proportion undefined"
        )
    numer = count_models(base.assume(*conclusions), budget)
    return Fraction(numer, denom)


def reiter_extensions(
    kb: KnowledgeBase,
    evidence: frozenset[GroundFact],
    rules: Sequence[DefaultRule],
    budget: int = DEFAULT_BUDGET,
) -> tuple[Extension, ...]:
    """All classic extensions of the grounded theory.

    Breadth-first over applied-rule sets with a fixed-point test; see
    module docstring for why current-state applicability loses nothing.
    Returned in a deterministic order (sorted by conclusion rendering);
    an empty rule set yields the single conclusion-free extension.
    """
    base = WorldState(kb, evidence)
    _require_consistent(base, budget)
    grs = ground_rules(rules, kb.constants)

    def world_of(applied: frozenset[GroundRule]) -> WorldState:
        return base.assume(*(gr.consequent_fact() for gr in applied))

    def applicable_set(applied: frozenset[GroundRule]) -> frozenset[GroundRule]:
        w = world_of(applied)
        return frozenset(
            gr for gr in grs if applicable(gr, w, budget) is Applicability.APPLIES
        )

    start: frozenset[GroundRule] = frozenset()
    paths: dict[frozenset[GroundRule], tuple[TraceStep, ...]] = {start: ()}
    queue = deque([start])
    found: dict[frozenset[GroundFact], Extension] = {}
    while queue:
        applied = queue.popleft()
        live = applicable_set(applied)
        if live == applied:
            conclusions = frozenset(gr.consequent_fact() for gr in applied)
            if conclusions not in found:
                w = world_of(applied)
                final = Fraction(count_models(w, budget), count_models(base, budget))
                found[conclusions] = Extension(
                    conclusions, paths[applied], final, "reiter"
                )
            continue
        w = world_of(applied)
        for gr in grs:
            if gr in applied or gr not in live:
                continue
            child = applied | {gr}
            if child in paths:
                continue
            p = proportion(w, gr.consequent_fact(), budget)
            paths[child] = paths[applied] + (TraceStep(gr, p),)
            queue.append(child)
    return tuple(sorted(found.values(), key=_conclusion_sort_key))


def thresholded_extension(
    kb: KnowledgeBase,
    evidence: frozenset[GroundFact],
    rules: Sequence[DefaultRule],
    epsilon_star: Fraction,
    ordering: str | Sequence[str] = "greedy",
    strict: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> Extension:
    """Fire rules one at a time under the proportion threshold.

    A candidate must be applicable and unfired, and its consequent must
    hold in more than 1 - epsilon_star of the current models (at least,
    when `strict` is off). `ordering` picks among clearing candidates:

    * "greedy"   - highest current proportion, declaration order on ties
    * "declared" - first clearing candidate in declaration order
    * a sequence - priority list of rule names (or "name@constant");
      unlisted rules never fire

    Stops when no candidate clears; the trace records each firing's
    exact proportion.
    """
    if not (0 < epsilon_star <= 1):
        raise ValueError("epsilon_star must lie in (0, 1]")
    base = WorldState(kb, evidence)
    _require_consistent(base, budget)
    grs = list(ground_rules(rules, kb.constants))
    if not isinstance(ordering, str):
        ranked: list[GroundRule] = []
        for wanted in ordering:
            hits = [
                gr for gr in grs
                if gr.label() == wanted or gr.rule.name == wanted
            ]
            if not hits:
                raise KeyError(f"no rule named {wanted!r} to order by")
            ranked.extend(h for h in hits if h not in ranked)
        grs = ranked
    elif ordering not in ("greedy", "declared"):
        raise ValueError(f"unknown ordering {ordering!r}")

    threshold = 1 - epsilon_star
    world = base
    fired: list[GroundRule] = []
    trace: list[TraceStep] = []
    while True:
        scored: list[tuple[Fraction, int, GroundRule]] = []
        for i, gr in enumerate(grs):
            if gr in fired:
                continue
            if applicable(gr, world, budget) is not Applicability.APPLIES:
                continue
            p = proportion(world, gr.consequent_fact(), budget)
            clears = p > threshold if strict else p >= threshold
            if not clears:
                continue
            scored.append((p, i, gr))
            if ordering == "declared" or not isinstance(ordering, str):
                break
        if not scored:
            break
        if isinstance(ordering, str) and ordering == "greedy":
            p, _, gr = max(scored, key=lambda t: (t[0], -t[1]))
        else:
            p, _, gr = scored[0]
        fired.append(gr)
        trace.append(TraceStep(gr, p))
        world = world.assume(gr.consequent_fact())
    conclusions = frozenset(gr.consequent_fact() for gr in fired)
    final = Fraction(count_models(world, budget), count_models(base, budget))
    return Extension(conclusions, tuple(trace), final, "threshold")


@dataclass(frozen=True)
class DeltaReport:
    """Outcome of the exhaustive evidence sweep for one rule."""

    rule: DefaultRule
    delta: Fraction
    valid: bool
    worst_evidence: Optional[tuple[GroundLiteral, ...]]
    worst_constant: Optional[ConstantSym]
    worst_proportion: Fraction
    evidence_checked: int
    applicable_cases: int


def delta_valid_check(
    rule: DefaultRule,
    kb: KnowledgeBase,
    delta: Fraction,
    bound: int = DEFAULT_EVIDENCE_BOUND,
    strict: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> DeltaReport:
    """Measure the rule's worst-case error over all literal evidence sets.

    Evidence ranges over every assignment of asserted/denied/absent to
    each (constant, predicate) pair; that space has 3^(constants *
    predicates) members and the check refuses (never samples) when it
    exceeds `bound`. For each consistent evidence set and each constant
    where the rule is applicable, the error is the proportion of models
    in which the conclusion fails; the rule is delta-valid when the worst
    error stays within delta (inclusively, unless `strict`).
    """
    k = len(kb.predicates)
    c = len(kb.constants)
    space = 3 ** (k * c)
    if space > bound:
        raise EvidenceBoundError(
            f"{space} evidence sets exceed the bound of {bound}; "
            "raise it explicitly if you mean it"
        )
    pairs = [(const, pred) for const in kb.constants for pred in kb.predicates]
    worst = Fraction(0)
    worst_e: Optional[tuple[GroundLiteral, ...]] = None
    worst_const: Optional[ConstantSym] = None
    checked = 0
    applicable_cases = 0
    for signs in product((None, True, False), repeat=len(pairs)):
        literals = tuple(
            GroundLiteral(sign, pred, const)
            for sign, (const, pred) in zip(signs, pairs)
            if sign is not None
        )
        checked += 1
        facts = frozenset(
            GroundFact(lit.constant, lit.formula()) for lit in literals
        )
        world = WorldState(kb, facts)
        if count_models(world, budget) == 0:
            continue
        for const in kb.constants:
            gr = GroundRule(rule, const)
            if applicable(gr, world, budget) is not Applicability.APPLIES:
                continue
            applicable_cases += 1
            err = proportion(
                world, GroundFact(const, negated(rule.consequent)), budget
            )
            if err > worst:
                worst = err
                worst_e = literals
                worst_const = const
    valid = worst < delta if strict else worst <= delta
    return DeltaReport(
        rule=rule,
        delta=delta,
        valid=valid,
        worst_evidence=worst_e,
        worst_constant=worst_const,
        worst_proportion=worst,
        evidence_checked=checked,
        applicable_cases=applicable_cases,
    )
