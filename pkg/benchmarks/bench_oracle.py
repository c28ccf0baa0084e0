"""Timing: compiled oracle kernel vs the chunked numpy fallback.

Runs the brute-force model count over growing domain sizes with each
backend forced in turn. The first jitted call pays compilation cost, so
one warm-up run precedes timing. Invoke from the repo root:

    python3 benchmarks/bench_oracle.py
"""

import os
import time
from fractions import Fraction

from statdefaults._kernels import HAS_NUMBA
from statdefaults.formulas import Atom, ConstantSym, Implies, PredicateSym
from statdefaults.kb import GroundFact, KnowledgeBase, StatStatement, WorldState
from statdefaults.oracle import oracle_count

CAP = 2 * 10**8


def penguin_world(domain_size: int) -> WorldState:
    bird = PredicateSym("Bird", 0)
    flies = PredicateSym("Flies", 1)
    penguin = PredicateSym("Penguin", 2)
    a = ConstantSym("a", 0)
    kb = KnowledgeBase(
        predicates=(bird, flies, penguin),
        constants=(a,),
        domain_size=domain_size,
        axioms=(Implies(Atom(penguin), Atom(bird)),),
        stats=(
            StatStatement(Atom(flies), Atom(bird), Fraction(17, 20), Fraction(19, 20)),
            StatStatement(Atom(flies), Atom(penguin), Fraction(0), Fraction(1, 10)),
        ),
    )
    return WorldState(kb, frozenset({GroundFact(a, Atom(bird))}))


def timed(world: WorldState, backend: str) -> tuple:
    os.environ["STATDEFAULTS_ORACLE_BACKEND"] = backend
    try:
        start = time.perf_counter()
        value = oracle_count(world, CAP)
        elapsed = time.perf_counter() - start
    finally:
        del os.environ["STATDEFAULTS_ORACLE_BACKEND"]
    return value, elapsed


def main() -> None:
    if not HAS_NUMBA:
        print("numba unavailable; timing the numpy fallback only")
    else:
        timed(penguin_world(4), "numba")  # warm-up, compile outside the clock

    print(f"{'N':>3} {'pairs':>12} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}")
    for domain_size in (6, 7, 8, 9):
        world = penguin_world(domain_size)
        pairs = 6**domain_size * domain_size
        value_np, t_np = timed(world, "numpy")
        if HAS_NUMBA:
            value_nb, t_nb = timed(world, "numba")
            assert value_np == value_nb, (value_np, value_nb)
            ratio = f"{t_np / t_nb:7.1f}x"
            nb_txt = f"{t_nb:10.3f}"
        else:
            ratio, nb_txt = "      -", "         -"
        print(f"{domain_size:>3} {pairs:>12} {t_np:10.3f} {nb_txt} {ratio}"
              f"   count={value_np}")


if __name__ == "__main__":
    main()
