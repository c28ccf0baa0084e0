"""Monadic formulas over unary predicates, plus evaluation on cells.

A cell is the complete description of a single domain element: a bitmask
whose i-th bit says whether predicate number i holds of the element. Every
formula here has exactly one implicit free variable, so its truth value on
an element depends only on the element's cell. That is what makes exact
counting tractable: a formula is fully characterised by the set of cells
that satisfy it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union


@dataclass(frozen=True, order=True)
class PredicateSym:
    """A declared unary predicate. `index` is its bit position in cells."""

    name: str
    index: int


@dataclass(frozen=True, order=True)
class ConstantSym:
    """A declared constant. Constants may co-refer; no unique-names rule."""

    name: str
    index: int


@dataclass(frozen=True)
class Atom:
    pred: PredicateSym


@dataclass(frozen=True)
class Not:
    operand: "MonadicFormula"


@dataclass(frozen=True)
class And:
    left: "MonadicFormula"
    right: "MonadicFormula"


@dataclass(frozen=True)
class Or:
    left: "MonadicFormula"
    right: "MonadicFormula"


@dataclass(frozen=True)
class Implies:
    left: "MonadicFormula"
    right: "MonadicFormula"


@dataclass(frozen=True)
class Iff:
    left: "MonadicFormula"
    right: "MonadicFormula"


MonadicFormula = Union[Atom, Not, And, Or, Implies, Iff]


def satisfies(formula: MonadicFormula, cell: int) -> bool:
    """Truth of `formula` on an element whose cell bitmask is `cell`."""
    if isinstance(formula, Atom):
        return bool(cell >> formula.pred.index & 1)
    if isinstance(formula, Not):
        return not satisfies(formula.operand, cell)
    if isinstance(formula, And):
        return satisfies(formula.left, cell) and satisfies(formula.right, cell)
    if isinstance(formula, Or):
        return satisfies(formula.left, cell) or satisfies(formula.right, cell)
    if isinstance(formula, Implies):
        return (not satisfies(formula.left, cell)) or satisfies(formula.right, cell)
    if isinstance(formula, Iff):
        return satisfies(formula.left, cell) == satisfies(formula.right, cell)
    raise TypeError(f"not a formula: {formula!r}")


def negated(formula: MonadicFormula) -> MonadicFormula:
    """Negate, collapsing a top-level double negation.

    The collapse matters when matching complemented statistics: the
    complement of a stat about `not P` must line up with a query about `P`.
    """
    if isinstance(formula, Not):
        return formula.operand
    return Not(formula)


def conj(parts: Iterable[MonadicFormula]) -> MonadicFormula:
    """Left-folded conjunction; raises on an empty iterable."""
    items = list(parts)
    if not items:
        raise ValueError("empty conjunction")
    acc = items[0]
    for item in items[1:]:
        acc = And(acc, item)
    return acc


def disj(parts: Iterable[MonadicFormula]) -> MonadicFormula:
    """Left-folded disjunction; raises on an empty iterable."""
    items = list(parts)
    if not items:
        raise ValueError("empty disjunction")
    acc = items[0]
    for item in items[1:]:
        acc = Or(acc, item)
    return acc


def atoms(formula: MonadicFormula) -> Iterator[PredicateSym]:
    """Yield every predicate symbol occurring in the formula."""
    if isinstance(formula, Atom):
        yield formula.pred
    elif isinstance(formula, Not):
        yield from atoms(formula.operand)
    else:
        yield from atoms(formula.left)
        yield from atoms(formula.right)


# Binding strength for the canonical printer. Implication is right
# associative, the other binary connectives left associative.
_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6}


def fmt(formula: MonadicFormula) -> str:
    """Canonical text form; `parse` on the result is the identity."""
    return _fmt(formula, 0)


def _fmt(formula: MonadicFormula, context: int) -> str:
    prec = _PRECEDENCE[type(formula)]
    if isinstance(formula, Atom):
        text = formula.pred.name
    elif isinstance(formula, Not):
        text = "not " + _fmt(formula.operand, prec)
    elif isinstance(formula, And):
        text = _fmt(formula.left, prec) + " and " + _fmt(formula.right, prec + 1)
    elif isinstance(formula, Or):
        text = _fmt(formula.left, prec) + " or " + _fmt(formula.right, prec + 1)
    elif isinstance(formula, Implies):
        text = _fmt(formula.left, prec + 1) + " -> " + _fmt(formula.right, prec)
    else:
        text = _fmt(formula.left, prec) + " <-> " + _fmt(formula.right, prec + 1)
    if prec < context:
        return "(" + text + ")"
    return text
