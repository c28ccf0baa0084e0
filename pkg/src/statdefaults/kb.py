"""Knowledge-base value types.

All types here are immutable and hashable, which the counting layer relies
on for memoisation. A KnowledgeBase carries the shared background theory
(axioms plus interval statistics over a fixed finite domain size); evidence
and rule conclusions live in WorldState ground facts, not in the KB itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .formulas import (
    Atom,
    ConstantSym,
    MonadicFormula,
    Not,
    PredicateSym,
    atoms,
    fmt,
    negated,
)


@dataclass(frozen=True)
class GroundLiteral:
    """A signed predicate assertion about one constant, e.g. `not Fly(a)`."""

    positive: bool
    pred: PredicateSym
    constant: ConstantSym

    def formula(self) -> MonadicFormula:
        atom = Atom(self.pred)
        return atom if self.positive else Not(atom)

    def __str__(self) -> str:
        sign = "" if self.positive else "not "
        return f"{sign}{self.pred.name}({self.constant.name})"


@dataclass(frozen=True)
class GroundFact:
    """A monadic formula asserted of one constant.

    Evidence literals and applied rule conclusions both become ground
    facts; the counting layer treats them uniformly.
    """

    constant: ConstantSym
    formula: MonadicFormula

    def negated(self) -> "GroundFact":
        return GroundFact(self.constant, negated(self.formula))

    def __str__(self) -> str:
        return f"{fmt(self.formula)}({self.constant.name})"


@dataclass(frozen=True)
class StatStatement:
    """Interval statistic: the proportion of `reference` elements that are
    also `target` elements lies in [lower, upper]. Endpoints are closed.
    """

    target: MonadicFormula
    reference: MonadicFormula
    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError(
                f"stat interval [{self.lower}, {self.upper}] must satisfy "
                "0 <= lower <= upper <= 1"
            )

    def complement(self) -> "StatStatement":
        """The same constraint read for the negated target."""
        return StatStatement(
            negated(self.target), self.reference, 1 - self.upper, 1 - self.lower
        )

    def __str__(self) -> str:
        return (
            f"stat {fmt(self.target)} | {fmt(self.reference)} "
            f"in [{self.lower}, {self.upper}]"
        )


@dataclass(frozen=True)
class GeneratedOrigin:
    """Provenance of a generated rule: which recipe case produced it and
    from which statistics. `primary` is the stat whose reference is the
    rule's prerequisite; its lower bound drives the delta filter.
    """

    case_tag: str
    primary: StatStatement
    partner: Optional[StatStatement] = None


@dataclass(frozen=True)
class DefaultRule:
    """prerequisite : justification_1, ... / consequent.

    Structural identity ignores `origin` and `name`, so a rule re-read from
    a serialised file compares equal to the generated rule that wrote it.
    """

    prerequisite: MonadicFormula
    justifications: Tuple[MonadicFormula, ...]
    consequent: MonadicFormula
    name: str = field(default="", compare=False)
    origin: Union[str, GeneratedOrigin] = field(default="declared", compare=False)

    def __post_init__(self) -> None:
        if not self.justifications:
            raise ValueError("a default rule needs at least one justification")

    def key(self):
        """Dedup key: justification order is irrelevant."""
        return (self.prerequisite, frozenset(self.justifications), self.consequent)

    def __str__(self) -> str:
        justs = ", ".join(fmt(j) for j in self.justifications)
        return f"{fmt(self.prerequisite)} : {justs} / {fmt(self.consequent)}"


@dataclass(frozen=True)
class ThresholdConfig:
    """Engine knobs: delta for rule validity, epsilon_star for thresholding."""

    delta: Fraction = Fraction(1, 20)
    epsilon_star: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if not (0 < self.delta <= 1):
            raise ValueError("delta must lie in (0, 1]")
        if not (0 < self.epsilon_star <= 1):
            raise ValueError("epsilon_star must lie in (0, 1]")


@dataclass(frozen=True)
class KnowledgeBase:
    predicates: Tuple[PredicateSym, ...]
    constants: Tuple[ConstantSym, ...]
    domain_size: int
    axioms: Tuple[MonadicFormula, ...] = ()
    stats: Tuple[StatStatement, ...] = ()
    # When a model has no reference elements at all, its stats hold
    # vacuously by default; flip to False to treat that model as violating.
    vacuous_reference_satisfied: bool = True

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise ValueError("domain size must be at least 1")
        names = [p.name for p in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError("duplicate predicate names")
        cnames = [c.name for c in self.constants]
        if len(set(cnames)) != len(cnames):
            raise ValueError("duplicate constant names")
        for i, p in enumerate(self.predicates):
            if p.index != i:
                raise ValueError("predicate indices must match declaration order")
        for i, c in enumerate(self.constants):
            if c.index != i:
                raise ValueError("constant indices must match declaration order")
        for f in self.axioms:
            self._check_syms(f)
        for s in self.stats:
            self._check_syms(s.target)
            self._check_syms(s.reference)

    def _check_syms(self, formula: MonadicFormula) -> None:
        for pred in atoms(formula):
            if pred.index >= len(self.predicates) or self.predicates[pred.index] != pred:
                raise ValueError(f"predicate {pred.name} is not declared in this KB")

    def pred(self, name: str) -> PredicateSym:
        for p in self.predicates:
            if p.name == name:
                return p
        raise KeyError(f"no predicate named {name}")

    def const(self, name: str) -> ConstantSym:
        for c in self.constants:
            if c.name == name:
                return c
        raise KeyError(f"no constant named {name}")

    def atom(self, name: str) -> Atom:
        return Atom(self.pred(name))

    def with_domain(self, domain_size: int) -> "KnowledgeBase":
        return replace(self, domain_size=domain_size)


@dataclass(frozen=True)
class WorldState:
    """A KB plus accumulated ground facts (evidence and conclusions)."""

    kb: KnowledgeBase
    facts: frozenset[GroundFact] = frozenset()

    def assume(self, *new_facts: GroundFact) -> "WorldState":
        return WorldState(self.kb, self.facts | set(new_facts))

    def facts_for(self, constant: ConstantSym) -> Tuple[MonadicFormula, ...]:
        """The constant's constraints in a deterministic order."""
        mine = [f.formula for f in self.facts if f.constant == constant]
        return tuple(sorted(mine, key=fmt))


@dataclass(frozen=True)
class KBDocument:
    """Everything one KB file holds: theory, evidence, rules, config."""

    kb: KnowledgeBase
    evidence: Tuple[GroundLiteral, ...] = ()
    rules: Tuple[DefaultRule, ...] = ()
    config: ThresholdConfig = ThresholdConfig()

    def evidence_facts(self) -> frozenset[GroundFact]:
        return frozenset(GroundFact(lit.constant, lit.formula()) for lit in self.evidence)

    def world(self) -> WorldState:
        return WorldState(self.kb, self.evidence_facts())


def ground_facts(*pairs: tuple) -> frozenset[GroundFact]:
    """Convenience: build a fact set from (constant, formula) pairs."""
    return frozenset(GroundFact(c, f) for c, f in pairs)


def name_rules(rules: Iterable[DefaultRule], prefix: str = "d") -> Tuple[DefaultRule, ...]:
    """Assign positional names d1, d2, ... to rules lacking one."""
    named = []
    for i, rule in enumerate(rules, start=1):
        if rule.name:
            named.append(rule)
        else:
            named.append(replace(rule, name=f"{prefix}{i}"))
    return tuple(named)
