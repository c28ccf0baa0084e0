"""Hot counting kernels for the brute-force oracle.

Two interchangeable implementations of the same exact computation:

* a numba @njit odometer loop (fast path), and
* a chunked, vectorised numpy fallback,

selected at call time by the oracle module (see the
STATDEFAULTS_ORACLE_BACKEND environment flag there). All arithmetic stays
in int64; callers must cap the walked space so no intermediate exceeds it.

The computation: elements 0..N-1 each take one of A allowed cells. For
every such assignment that satisfies all interval statistics, every
placement of the C constants onto elements whose cell satisfies that
constant's constraints is counted, one by one. No combinatorial shortcuts:
this is the dumb path the clever counter is checked against.
"""

from __future__ import annotations

import numpy as np


def count_explicit_numpy(
    ref_tab: np.ndarray,      # (S, A) uint8, reference holds in cell
    tgt_tab: np.ndarray,      # (S, A) uint8, target AND reference hold
    lo_num: np.ndarray,       # (S,) int64
    lo_den: np.ndarray,
    hi_num: np.ndarray,
    hi_den: np.ndarray,
    vacuous_ok: int,
    const_tab: np.ndarray,    # (C, A) uint8, constant constraint holds
    n_elements: int,
    n_cells: int,
    chunk: int = 1 << 15,
) -> int:
    """Pure-numpy fallback; exact, vectorised over assignment chunks."""
    if n_cells == 0:
        return 0
    n_stats = ref_tab.shape[0]
    n_consts = const_tab.shape[0]
    n_assign = n_cells ** n_elements
    weights = n_cells ** np.arange(n_elements - 1, -1, -1, dtype=np.int64)
    placements = list(_placements(n_elements, n_consts))
    total = 0
    for start in range(0, n_assign, chunk):
        idx = np.arange(start, min(start + chunk, n_assign), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % n_cells
        sat = np.ones(len(idx), dtype=bool)
        for s in range(n_stats):
            refs = ref_tab[s][digits].sum(axis=1).astype(np.int64)
            tgts = tgt_tab[s][digits].sum(axis=1).astype(np.int64)
            inside = (lo_num[s] * refs <= tgts * lo_den[s]) & (
                tgts * hi_den[s] <= hi_num[s] * refs
            )
            if vacuous_ok:
                sat &= np.where(refs == 0, True, inside)
            else:
                sat &= (refs > 0) & inside
        for g in placements:
            ok = sat.copy()
            for c in range(n_consts):
                ok &= const_tab[c][digits[:, g[c]]].astype(bool)
            total += int(ok.sum())
    return total


def _placements(n_elements: int, n_consts: int):
    """All constant placements, most-significant constant first."""
    if n_consts == 0:
        yield ()
        return
    for rest in _placements(n_elements, n_consts - 1):
        for e in range(n_elements):
            yield rest + (e,)


def _count_loops(
    ref_tab, tgt_tab, lo_num, lo_den, hi_num, hi_den,
    vacuous_ok, const_tab, n_elements, n_cells,
):
    # Same semantics as count_explicit_numpy, written as plain loops so
    # numba can compile it. Assignment odometer, then placement odometer.
    if n_cells == 0:
        return 0
    n_stats = ref_tab.shape[0]
    n_consts = const_tab.shape[0]
    digits = np.zeros(n_elements, dtype=np.int64)
    n_assign = 1
    for _ in range(n_elements):
        n_assign *= n_cells
    total = 0
    for _ in range(n_assign):
        ok = True
        for s in range(n_stats):
            refs = 0
            tgts = 0
            for e in range(n_elements):
                refs += ref_tab[s, digits[e]]
                tgts += tgt_tab[s, digits[e]]
            if refs == 0:
                if vacuous_ok == 0:
                    ok = False
            elif not (
                lo_num[s] * refs <= tgts * lo_den[s]
                and tgts * hi_den[s] <= hi_num[s] * refs
            ):
                ok = False
            if not ok:
                break
        if ok:
            if n_consts == 0:
                total += 1
            else:
                place = np.zeros(n_consts, dtype=np.int64)
                while True:
                    good = True
                    for c in range(n_consts):
                        if const_tab[c, digits[place[c]]] == 0:
                            good = False
                            break
                    if good:
                        total += 1
                    pos = n_consts - 1
                    while pos >= 0:
                        place[pos] += 1
                        if place[pos] < n_elements:
                            break
                        place[pos] = 0
                        pos -= 1
                    if pos < 0:
                        break
        pos = n_elements - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < n_cells:
                break
            digits[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return total


try:
    from numba import njit

    count_explicit_numba = njit(cache=True)(_count_loops)
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    count_explicit_numba = None
    HAS_NUMBA = False
