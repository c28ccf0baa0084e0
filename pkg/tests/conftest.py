"""Shared corpus: the small knowledge bases every test layer reuses.

Frozen expected values in the tests were computed with the brute-force
oracle first (enumerate every model, count), then asserted against the
closed-form counter. When a number appears in a test with no derivation
comment, it came from that oracle run.
"""

import random
from fractions import Fraction

import pytest

from statdefaults.formulas import (
    And,
    Atom,
    ConstantSym,
    Iff,
    Implies,
    Not,
    Or,
    PredicateSym,
)
from statdefaults.kb import (
    GroundFact,
    KnowledgeBase,
    StatStatement,
    WorldState,
)

F15_20 = Fraction(17, 20), Fraction(19, 20)


def make_bird_kb(domain_size: int = 8) -> KnowledgeBase:
    """Two predicates, one statistic: most birds fly."""
    bird = PredicateSym("Bird", 0)
    flies = PredicateSym("Flies", 1)
    a = ConstantSym("a", 0)
    return KnowledgeBase(
        predicates=(bird, flies),
        constants=(a,),
        domain_size=domain_size,
        stats=(StatStatement(Atom(flies), Atom(bird), *F15_20),),
    )


def make_penguin_kb(domain_size: int = 8) -> KnowledgeBase:
    """Birds mostly fly, penguins are birds that mostly do not."""
    bird = PredicateSym("Bird", 0)
    flies = PredicateSym("Flies", 1)
    penguin = PredicateSym("Penguin", 2)
    a = ConstantSym("a", 0)
    return KnowledgeBase(
        predicates=(bird, flies, penguin),
        constants=(a,),
        domain_size=domain_size,
        axioms=(Implies(Atom(penguin), Atom(bird)),),
        stats=(
            StatStatement(Atom(flies), Atom(bird), *F15_20),
            StatStatement(Atom(flies), Atom(penguin), Fraction(0), Fraction(1, 10)),
        ),
    )


def make_penguin_wide_kb(domain_size: int = 10) -> KnowledgeBase:
    """Looser intervals; at tolerance 2/5 the unguarded bird rule is
    demonstrably unsound given penguin evidence."""
    bird = PredicateSym("Bird", 0)
    flies = PredicateSym("Flies", 1)
    penguin = PredicateSym("Penguin", 2)
    a = ConstantSym("a", 0)
    return KnowledgeBase(
        predicates=(bird, flies, penguin),
        constants=(a,),
        domain_size=domain_size,
        axioms=(Implies(Atom(penguin), Atom(bird)),),
        stats=(
            StatStatement(Atom(flies), Atom(bird), Fraction(3, 5), Fraction(4, 5)),
            StatStatement(Atom(flies), Atom(penguin), Fraction(0), Fraction(1, 5)),
        ),
    )


def _red_kb(sub_interval) -> KnowledgeBase:
    bird = PredicateSym("Bird", 0)
    red = PredicateSym("Red", 1)
    flies = PredicateSym("Flies", 2)
    a = ConstantSym("a", 0)
    return KnowledgeBase(
        predicates=(bird, red, flies),
        constants=(a,),
        domain_size=8,
        stats=(
            StatStatement(Atom(flies), Atom(bird), *F15_20),
            StatStatement(Atom(flies), And(Atom(red), Atom(bird)), *sub_interval),
        ),
    )


def make_red_nested_kb() -> KnowledgeBase:
    """Red birds' interval [1/2, 1] brackets the bird interval, so redness
    carries no information against flight."""
    return _red_kb((Fraction(1, 2), Fraction(1)))


def make_red_conflicting_kb() -> KnowledgeBase:
    """Red birds' interval [1/2, 4/5] sits below the bird interval; the
    bird rule must not reach red birds."""
    return _red_kb((Fraction(1, 2), Fraction(4, 5)))


# Corpus for the exhaustive rule-validity sweep: every KB whose compiled
# rule set is expected to pass at the listed tolerance. The exhaustive
#-outcomes schema is deliberately absent: its rules fail the sweep at
# compound evidence (see test_engine.py), which is the point of that
# construction, not a defect to hide.
def delta_corpus():
    return [
        ("birds", make_bird_kb(), Fraction(3, 20)),
        ("penguins", make_penguin_kb(), Fraction(3, 20)),
        ("red-nested", make_red_nested_kb(), Fraction(3, 20)),
        ("red-conflicting", make_red_conflicting_kb(), Fraction(3, 20)),
        ("penguins-wide", make_penguin_wide_kb(), Fraction(2, 5)),
    ]


@pytest.fixture
def bird_kb():
    return make_bird_kb()


@pytest.fixture
def penguin_kb():
    return make_penguin_kb()


@pytest.fixture
def red_nested_kb():
    return make_red_nested_kb()


@pytest.fixture
def red_conflicting_kb():
    return make_red_conflicting_kb()


# --- random world generation, shared by the oracle-equivalence and
# --- degeneration sweeps

_CONNECTIVES = (And, Or, Implies, Iff)


def random_formula(rng: random.Random, preds, depth: int):
    if depth == 0 or rng.random() < 0.35:
        return Atom(rng.choice(preds))
    if rng.random() < 0.25:
        return Not(random_formula(rng, preds, depth - 1))
    ctor = rng.choice(_CONNECTIVES)
    return ctor(
        random_formula(rng, preds, depth - 1),
        random_formula(rng, preds, depth - 1),
    )


def random_fraction(rng: random.Random, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def random_world(rng: random.Random, max_preds=3, max_domain=4, max_consts=2):
    """One random WorldState. Axioms may turn out unsatisfiable; callers
    skip those draws when the counter raises."""
    k = rng.randint(1, max_preds)
    n = rng.randint(1, max_domain)
    nc = rng.randint(0, max_consts)
    preds = tuple(PredicateSym(f"P{i}", i) for i in range(k))
    consts = tuple(ConstantSym(f"c{i}", i) for i in range(nc))
    axioms = tuple(
        random_formula(rng, preds, 2) for _ in range(rng.randint(0, 2))
    )
    stats = []
    for _ in range(rng.randint(0, 2)):
        lo, hi = sorted((random_fraction(rng), random_fraction(rng)))
        stats.append(
            StatStatement(
                random_formula(rng, preds, 1),
                random_formula(rng, preds, 1),
                lo,
                hi,
            )
        )
    kb = KnowledgeBase(
        predicates=preds,
        constants=consts,
        domain_size=n,
        axioms=axioms,
        stats=tuple(stats),
        vacuous_reference_satisfied=rng.random() < 0.8,
    )
    facts = frozenset(
        GroundFact(c, random_formula(rng, preds, 1))
        for c in consts
        if rng.random() < 0.7
    )
    return WorldState(kb, facts)
