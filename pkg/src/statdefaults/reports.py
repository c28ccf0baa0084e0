"""Deterministic run reports: exact rationals first, display second.

Every proportion appears as a num/den fraction string (the source of
truth) alongside a fixed six-place decimal computed with integer
arithmetic, so reports never depend on float formatting. The JSON form
sorts keys and carries `"timing_ms": null`; wall-clock timing goes to
stderr, keeping repeated runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def dec6(value: Fraction) -> str:
    """Six decimal places, round half away from zero, no floats."""
    num, den = value.numerator, value.denominator
    scaled = (abs(num) * 10**6 * 2 + den) // (2 * den)
    sign = "-" if num < 0 else ""
    return f"{sign}{scaled // 10**6}.{scaled % 10**6:06d}"


def proportion_obj(value: Fraction) -> dict:
    return {"fraction": frac_str(value), "decimal": dec6(value)}


def kb_digest(canonical_text: str) -> str:
    return hashlib.sha256(canonical_text.encode("utf-8")).hexdigest()


def run_report(command: str, arguments: dict, kb_info: dict, results) -> dict:
    return {
        "command": command,
        "arguments": arguments,
        "kb": kb_info,
        "results": results,
        "timing_ms": None,
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def table(
    headers: Sequence[str], rows: Iterable[Sequence[str]], indent: str = ""
) -> str:
    """Fixed-width text table; columns sized to content."""
    rows = [list(map(str, r)) for r in rows]
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return indent + "  ".join(
            cell.ljust(w) for cell, w in zip(cells, widths)
        ).rstrip()
    out = [line(headers), line("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def write_report(path: Optional[str], report: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_json(report))
