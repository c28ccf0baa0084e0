"""Brute-force model enumeration, used as an independent check.

Everything here is deliberately naive. Models over a finite domain with
monadic predicates are walked one by one (or, in the kernel-backed
counting path, one assignment chunk at a time) and tested against the
axioms, the interval statistics, and the ground facts. The combinatorial
counter in `counting` must agree with this module exactly on every input
small enough for both; that agreement is what the test suite leans on.

For that reason this module does not import the counter, and it carries
its own formula evaluator rather than reusing `formulas.satisfies`. Keep
it that way: shared code here would quietly turn a two-sided check into a
one-sided one.

The kernel backend is chosen by STATDEFAULTS_ORACLE_BACKEND:

* ``numba``  - require the @njit kernel, error if numba is missing
* ``numpy``  - force the chunked numpy fallback
* unset      - numba when importable, numpy otherwise
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Union

import numpy as np

from . import _kernels
from .errors import EmptyConditionError, EnumerationCapError, StatDefaultsError
from .formulas import And, Atom, Iff, Implies, MonadicFormula, Not, Or, fmt
from .kb import GroundFact, KnowledgeBase, StatStatement, WorldState

DEFAULT_ENUM_CAP = 10**7

_INT64_GUARD = 1 << 40  # keep num*count and den*count well inside int64


@dataclass(frozen=True)
class ExplicitModel:
    """One finite model, spelled out.

    cells[e] is the predicate bitmask of element e (bit i set means
    predicate i holds there); denote[c] is the element constant c names.
    """

    cells: tuple[int, ...]
    denote: tuple[int, ...]


def _holds(formula: MonadicFormula, cell: int) -> bool:
    # Independent twin of formulas.satisfies, see module docstring.
    if isinstance(formula, Atom):
        return bool(cell >> formula.pred.index & 1)
    if isinstance(formula, Not):
        return not _holds(formula.operand, cell)
    if isinstance(formula, And):
        return _holds(formula.left, cell) and _holds(formula.right, cell)
    if isinstance(formula, Or):
        return _holds(formula.left, cell) or _holds(formula.right, cell)
    if isinstance(formula, Implies):
        return (not _holds(formula.left, cell)) or _holds(formula.right, cell)
    if isinstance(formula, Iff):
        return _holds(formula.left, cell) == _holds(formula.right, cell)
    raise TypeError(f"not a formula: {formula!r}")


def _size(arg) -> int:
    return arg if isinstance(arg, int) else len(arg)


def enumerate_models(
    domain_size: int,
    predicates,
    constants,
    cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[ExplicitModel]:
    """Stream every explicit model of the raw (unconstrained) signature.

    `predicates` and `constants` may be counts or the declared sequences.
    Order is fixed: cell assignments tick like a base-2^k odometer with
    element 0 most significant, and constant placements tick base-N inside
    each assignment. Raises EnumerationCapError up front when the full
    stream would exceed `cap` models.
    """
    n_preds = _size(predicates)
    n_consts = _size(constants)
    if domain_size < 1:
        raise ValueError("domain_size must be at least 1")
    n_cells = 1 << n_preds
    space = n_cells**domain_size * domain_size**n_consts
    if space > cap:
        raise EnumerationCapError(
            f"{space} explicit models exceed the cap of {cap}"
        )
    for cells in product(range(n_cells), repeat=domain_size):
        for denote in product(range(domain_size), repeat=n_consts):
            yield ExplicitModel(cells, denote)


Sentence = Union[MonadicFormula, StatStatement, GroundFact]


def oracle_satisfies(
    model: ExplicitModel,
    sentence: Sentence,
    vacuous_ok: bool = True,
) -> bool:
    """Truth of one sentence in one explicit model.

    A bare formula is read as universally quantified. An interval
    statistic with an empty reference class counts as satisfied exactly
    when `vacuous_ok` is set.
    """
    if isinstance(sentence, GroundFact):
        cell = model.cells[model.denote[sentence.constant.index]]
        return _holds(sentence.formula, cell)
    if isinstance(sentence, StatStatement):
        refs = 0
        tgts = 0
        for cell in model.cells:
            if _holds(sentence.reference, cell):
                refs += 1
                if _holds(sentence.target, cell):
                    tgts += 1
        if refs == 0:
            return vacuous_ok
        return sentence.lower <= Fraction(tgts, refs) <= sentence.upper
    return all(_holds(sentence, cell) for cell in model.cells)


def count_by_enumeration(world: WorldState, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Third, slowest path: stream and test. Only sane for tiny inputs."""
    kb = world.kb
    vac = kb.vacuous_reference_satisfied
    sentences: list[Sentence] = list(kb.axioms) + list(kb.stats) + sorted(
        world.facts, key=lambda f: (f.constant.index, fmt(f.formula))
    )
    total = 0
    for model in enumerate_models(
        kb.domain_size, kb.predicates, kb.constants, cap
    ):
        if all(oracle_satisfies(model, s, vac) for s in sentences):
            total += 1
    return total


def _pick_backend() -> str:
    flag = os.environ.get("STATDEFAULTS_ORACLE_BACKEND", "").strip().lower()
    if flag == "numba":
        if not _kernels.HAS_NUMBA:
            raise StatDefaultsError(
                "STATDEFAULTS_ORACLE_BACKEND=numba but numba is not installed"
            )
        return "numba"
    if flag == "numpy":
        return "numpy"
    if flag:
        raise StatDefaultsError(
            f"unknown oracle backend {flag!r}, expected numba or numpy"
        )
    return "numba" if _kernels.HAS_NUMBA else "numpy"


def _frac_parts(value: Fraction, scale: int) -> tuple[int, int]:
    num, den = value.numerator, value.denominator
    if abs(num) * scale >= _INT64_GUARD or den * scale >= _INT64_GUARD:
        raise StatDefaultsError(
            f"interval bound {value} too fine-grained for int64 kernels"
        )
    return num, den


def oracle_count(world: WorldState, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Count models of the world by explicit enumeration.

    Cells falsifying an axiom are pruned before the walk; the cap applies
    to the remaining space, pruned_cells^N * N^constants. Within the cap
    every intermediate fits int64, so both kernels are exact.
    """
    kb = world.kb
    n = kb.domain_size
    allowed = [
        cell
        for cell in range(1 << len(kb.predicates))
        if all(_holds(ax, cell) for ax in kb.axioms)
    ]
    n_cells = len(allowed)
    n_consts = len(kb.constants)
    space = n_cells**n * n**n_consts
    if space > cap:
        raise EnumerationCapError(
            f"{space} assignment/placement pairs exceed the cap of {cap}"
        )
    if n_cells == 0:
        return 0

    stats = list(kb.stats)
    ref_tab = np.zeros((len(stats), n_cells), dtype=np.uint8)
    tgt_tab = np.zeros((len(stats), n_cells), dtype=np.uint8)
    lo_num = np.zeros(len(stats), dtype=np.int64)
    lo_den = np.ones(len(stats), dtype=np.int64)
    hi_num = np.zeros(len(stats), dtype=np.int64)
    hi_den = np.ones(len(stats), dtype=np.int64)
    for s, stat in enumerate(stats):
        for a, cell in enumerate(allowed):
            if _holds(stat.reference, cell):
                ref_tab[s, a] = 1
                if _holds(stat.target, cell):
                    tgt_tab[s, a] = 1
        lo_num[s], lo_den[s] = _frac_parts(stat.lower, n)
        hi_num[s], hi_den[s] = _frac_parts(stat.upper, n)

    const_tab = np.ones((n_consts, n_cells), dtype=np.uint8)
    for fact in world.facts:
        c = fact.constant.index
        for a, cell in enumerate(allowed):
            if not _holds(fact.formula, cell):
                const_tab[c, a] = 0

    vac = 1 if kb.vacuous_reference_satisfied else 0
    if _pick_backend() == "numba":
        return int(
            _kernels.count_explicit_numba(
                ref_tab, tgt_tab, lo_num, lo_den, hi_num, hi_den,
                vac, const_tab, n, n_cells,
            )
        )
    return _kernels.count_explicit_numpy(
        ref_tab, tgt_tab, lo_num, lo_den, hi_num, hi_den,
        vac, const_tab, n, n_cells,
    )


def oracle_proportion(
    world: WorldState, query: GroundFact, cap: int = DEFAULT_ENUM_CAP
) -> Fraction:
    """Exact share of the world's models where `query` also holds."""
    denom = oracle_count(world, cap)
    if denom == 0:
        raise EmptyConditionError(
            "no models satisfy the evidence, proportion undefined"
        )
    numer = oracle_count(world.assume(query), cap)
    return Fraction(numer, denom)
