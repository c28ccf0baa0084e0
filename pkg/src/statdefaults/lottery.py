"""Builder for the exhaustive-outcomes ("lottery") knowledge base.

One reference predicate B with outcome predicates S1..Sn that are
mutually exclusive and exhaustive over B, plus one interval statistic per
outcome saying it is rare. Each outcome then yields an exclusion default
"B : not Si / not Si": individually safe, jointly concluding that the
named individual is no outcome at all, which is the point of the
exercise.

The evidence fact B(a) only has models when the upper bounds sum to at
least 1 (every B element realises exactly one outcome, so the outcome
shares sum to exactly 1); `feasible` checks that before anything counts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .formulas import And, Atom, ConstantSym, Iff, Not, PredicateSym, disj
from .forge import generate_lottery_defaults
from .kb import (
    GroundLiteral,
    KBDocument,
    KnowledgeBase,
    ThresholdConfig,
)


def default_upper(n: int) -> Fraction:
    """A feasible per-outcome bound: 1/(n-1), or 1 when n is 1."""
    return Fraction(1, max(n - 1, 1))


def lottery_kb(
    n: int,
    domain_size: int = 8,
    upper: Optional[Fraction] = None,
    lower: Fraction = Fraction(0),
    uppers: Optional[Sequence[Fraction]] = None,
) -> KnowledgeBase:
    """The schema KB: B, S1..Sn, exclusivity/exhaustiveness, one stat per
    outcome. `uppers` gives per-outcome bounds; `upper` one for all."""
    if n < 1:
        raise ValueError("need at least one outcome")
    if uppers is None:
        uppers = [upper if upper is not None else default_upper(n)] * n
    if len(uppers) != n:
        raise ValueError(f"expected {n} upper bounds, got {len(uppers)}")
    ref = PredicateSym("B", 0)
    outcomes = tuple(PredicateSym(f"S{i + 1}", i + 1) for i in range(n))
    axioms = [Iff(Atom(ref), disj(Atom(s) for s in outcomes))]
    for i in range(n):
        for j in range(i + 1, n):
            axioms.append(Not(And(Atom(outcomes[i]), Atom(outcomes[j]))))
    from .kb import StatStatement

    stats = tuple(
        StatStatement(Atom(s), Atom(ref), lower, up)
        for s, up in zip(outcomes, uppers)
    )
    return KnowledgeBase(
        predicates=(ref,) + outcomes,
        constants=(ConstantSym("a", 0),),
        domain_size=domain_size,
        axioms=tuple(axioms),
        stats=stats,
    )


def feasible(kb: KnowledgeBase) -> bool:
    """Can any model contain a reference element? Needs sum(uppers) >= 1."""
    return sum(st.upper for st in kb.stats) >= 1


def lottery_document(
    n: int,
    domain_size: int = 8,
    upper: Optional[Fraction] = None,
    uppers: Optional[Sequence[Fraction]] = None,
    epsilon_star: Optional[Fraction] = None,
) -> KBDocument:
    """Full document: schema KB, evidence B(a), the exclusion rules, and
    a config whose delta is the smallest admitting every rule."""
    kb = lottery_kb(n, domain_size, upper=upper, uppers=uppers)
    rules, delta_star = generate_lottery_defaults(kb)
    eps = epsilon_star if epsilon_star is not None else delta_star
    return KBDocument(
        kb=kb,
        evidence=(GroundLiteral(True, kb.predicates[0], kb.constants[0]),),
        rules=rules,
        config=ThresholdConfig(delta=delta_star, epsilon_star=eps),
    )
