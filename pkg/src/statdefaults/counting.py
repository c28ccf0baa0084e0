"""Exact model counting by cell partition and composition sums.

With k monadic predicates every element falls into one of 2^k cells (the
conjunctions of predicates and their negations). Universal axioms only
ever strike out whole cells, interval statistics only see how many
elements landed in each cell, and a ground fact only asks whether its
constant's cell satisfies a formula. So two cells that agree on every
statistic's reference and target, and on every constant's accumulated
facts, are interchangeable; they get merged into a region.

For a domain of N unnamed elements, models then group by the vector
saying how many elements each region received. One vector contributes

    multinomial(N; n_1..n_R) * prod_r w_r^(n_r) * prod_c sum_{r ok(c)} n_r

models, where w_r is the number of cells merged into region r, and the
last product ranges over constants, counting the elements each could
denote. Statistics are checked once per vector. Everything is integer
arithmetic, so counts are exact at any size the budget admits.

The brute-force module `oracle` recomputes all of this by enumeration and
must agree; neither side imports the other's logic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator

from .errors import (
    CountBudgetError,
    EmptyConditionError,
    InconsistentAxiomsError,
)
from .formulas import MonadicFormula, satisfies
from .kb import GroundFact, KnowledgeBase, WorldState

DEFAULT_BUDGET = 10**8


@lru_cache(maxsize=None)
def feasible_cells(kb: KnowledgeBase) -> tuple[int, ...]:
    """Cells (predicate bitmasks) surviving every universal axiom."""
    cells = tuple(
        cell
        for cell in range(1 << len(kb.predicates))
        if all(satisfies(ax, cell) for ax in kb.axioms)
    )
    if not cells:
        raise InconsistentAxiomsError(
            "the universal axioms rule out every cell"
        )
    return cells


def entails_subset(
    kb: KnowledgeBase, narrow: MonadicFormula, wide: MonadicFormula
) -> bool:
    """True when the axioms force everything in `narrow` into `wide`."""
    return all(
        satisfies(wide, cell)
        for cell in feasible_cells(kb)
        if satisfies(narrow, cell)
    )


@lru_cache(maxsize=None)
def _regions(world: WorldState):
    """Merge interchangeable cells; see module docstring.

    Returns (weights, stat_masks, const_masks): weights[r] is the cell
    count of region r; stat_masks[s] is a pair of region index tuples
    (reference holds, target and reference hold); const_masks[c] lists
    the regions whose cells satisfy constant c's accumulated facts.
    """
    kb = world.kb
    cells = feasible_cells(kb)
    facts_by_const = [
        [f.formula for f in world.facts if f.constant == c]
        for c in kb.constants
    ]
    groups: dict[tuple, int] = {}
    weights: list[int] = []
    per_stat = [([], []) for _ in kb.stats]
    per_const = [[] for _ in kb.constants]
    for cell in cells:
        sig = (
            tuple(
                (
                    satisfies(st.reference, cell),
                    satisfies(st.reference, cell)
                    and satisfies(st.target, cell),
                )
                for st in kb.stats
            ),
            tuple(
                all(satisfies(f, cell) for f in facts)
                for facts in facts_by_const
            ),
        )
        r = groups.get(sig)
        if r is None:
            r = groups[sig] = len(weights)
            weights.append(0)
            for s, (in_ref, in_tgt) in enumerate(sig[0]):
                if in_ref:
                    per_stat[s][0].append(r)
                if in_tgt:
                    per_stat[s][1].append(r)
            for c, ok in enumerate(sig[1]):
                if ok:
                    per_const[c].append(r)
        weights[r] += 1
    return (
        tuple(weights),
        tuple((tuple(refs), tuple(tgts)) for refs, tgts in per_stat),
        tuple(tuple(regs) for regs in per_const),
    )


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of `total` into exactly `parts` parts."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


@lru_cache(maxsize=4096)
def count_models(world: WorldState, budget: int = DEFAULT_BUDGET) -> int:
    """Number of models of the world's axioms, statistics, and facts."""
    kb = world.kb
    weights, stat_masks, const_masks = _regions(world)
    n = kb.domain_size
    r = len(weights)
    vectors = comb(n + r - 1, r - 1)
    if vectors > budget:
        raise CountBudgetError(
            f"{vectors} composition vectors exceed the budget of {budget}"
        )
    bounds = [
        (st.lower.numerator, st.lower.denominator,
         st.upper.numerator, st.upper.denominator)
        for st in kb.stats
    ]
    vac = kb.vacuous_reference_satisfied
    fact_n = factorial(n)
    total = 0
    for vec in _compositions(n, r):
        ok = True
        for (refs, tgts), (lo_n, lo_d, hi_n, hi_d) in zip(stat_masks, bounds):
            r_count = sum(vec[i] for i in refs)
            t_count = sum(vec[i] for i in tgts)
            if r_count == 0:
                if not vac:
                    ok = False
                    break
            elif not (
                lo_n * r_count <= t_count * lo_d
                and t_count * hi_d <= hi_n * r_count
            ):
                ok = False
                break
        if not ok:
            continue
        term = fact_n
        for size, weight in zip(vec, weights):
            term = term // factorial(size) * weight**size
        for regs in const_masks:
            term *= sum(vec[i] for i in regs)
            if term == 0:
                break
        total += term
    return total


def consistent(world: WorldState, budget: int = DEFAULT_BUDGET) -> bool:
    """Does at least one model satisfy the world?"""
    return count_models(world, budget) > 0


def entails(
    world: WorldState, fact: GroundFact, budget: int = DEFAULT_BUDGET
) -> bool:
    """Does every model of the world satisfy `fact`?

    Vacuously true of an inconsistent world, as usual.
    """
    return count_models(world.assume(fact.negated()), budget) == 0


def proportion(
    world: WorldState, query: GroundFact, budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Exact share of the world's models that also satisfy `query`."""
    denom = count_models(world, budget)
    if denom == 0:
        raise EmptyConditionError(
            "no models satisfy the evidence, proportion undefined"
        )
    numer = count_models(world.assume(query), budget)
    return Fraction(numer, denom)
