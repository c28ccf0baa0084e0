"""Command-line front end.

Commands:

* generate       - compile candidate default rules from a KB's statistics
* extend         - compute extensions (classic or thresholded)
* soundness      - exhaustive delta-validity sweep over the rule set
* lottery        - emit and analyse an exhaustive-outcomes schema KB
* verify-oracle  - cross-check the counter against brute-force enumeration

Exit status: 0 on success, 1 when a check ran and found a violation
(soundness failure, oracle mismatch), 2 on command-level errors (bad
input, inconsistent evidence, exceeded budgets). Reports written via
--report are deterministic; timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from fractions import Fraction
from typing import Optional

from . import counting, oracle
from .dsl import parse_formula, parse_kb, serialize_kb
from .engine import (
    delta_valid_check,
    reiter_extensions,
    thresholded_extension,
)
from .errors import EmptyConditionError, StatDefaultsError
from .forge import compile_rules, generate_candidates, filter_by_delta
from .formulas import Atom, fmt
from .kb import GroundFact, KBDocument, WorldState
from .lottery import feasible, lottery_document
from .reports import (
    dec6,
    frac_str,
    kb_digest,
    proportion_obj,
    render_json,
    run_report,
    table,
    write_report,
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _load(path: str, domain: Optional[int]) -> KBDocument:
    with open(path, "r", encoding="utf-8") as fh:
        doc = parse_kb(fh.read())
    if domain is not None:
        doc = replace(doc, kb=doc.kb.with_domain(domain))
    return doc


def _kb_info(path: Optional[str], doc: KBDocument) -> dict:
    return {
        "path": path,
        "digest": kb_digest(serialize_kb(doc)),
        "domain": doc.kb.domain_size,
        "predicates": [p.name for p in doc.kb.predicates],
        "constants": [c.name for c in doc.kb.constants],
    }


def _rule_obj(rule, kept: bool, reason: Optional[str]) -> dict:
    origin = rule.origin
    return {
        "name": rule.name or None,
        "rule": str(rule),
        "case_tag": origin.case_tag if hasattr(origin, "case_tag") else origin,
        "source": str(origin.primary) if hasattr(origin, "primary") else None,
        "partner": (
            str(origin.partner)
            if hasattr(origin, "partner") and origin.partner is not None
            else None
        ),
        "kept": kept,
        "reason": reason,
    }


def cmd_generate(args) -> int:
    doc = _load(args.kbfile, args.domain)
    delta = args.delta if args.delta is not None else doc.config.delta
    if args.target:
        goals = [parse_formula(args.target, doc.kb)]
        sets = [filter_by_delta(generate_candidates(doc.kb, g), delta) for g in goals]
        rules = [r for cs in sets for r in cs.candidates]
        from .kb import name_rules

        rules = list(name_rules(rules))
    else:
        rules, sets = compile_rules(doc.kb, delta)
    goal_objs = []
    for cs in sets:
        entries = [_rule_obj(r, True, None) for r in cs.candidates]
        entries += [_rule_obj(r, False, why) for r, why in cs.rejected]
        goal_objs.append(
            {
                "target": fmt(cs.target),
                "rules": entries,
                "warnings": list(cs.warnings),
            }
        )
        print(f"goal {fmt(cs.target)}")
        rows = [
            (e["case_tag"], e["rule"], "kept" if e["kept"] else "rejected",
             e["reason"] or "")
            for e in entries
        ]
        print(table(("case", "rule", "verdict", "reason"), rows, indent="  "))
        for w in cs.warnings:
            print(f"  warning: {w}")
    print(f"compiled rule set at delta {frac_str(delta)}:")
    for r in rules:
        print(f"  default {r.name}: {r}")
    if not rules:
        print("  (empty)")
    report = run_report(
        "generate",
        {"kbfile": args.kbfile, "delta": frac_str(delta),
         "target": args.target, "domain": args.domain},
        _kb_info(args.kbfile, doc),
        {"goals": goal_objs, "rules": [str(r) for r in rules]},
    )
    write_report(args.report, report)
    return 0


def _extension_obj(ext) -> dict:
    return {
        "conclusions": sorted(str(f) for f in ext.conclusions),
        "proportion": proportion_obj(ext.final_proportion),
        "mode": ext.mode,
        "trace": [
            {"rule": step.ground_rule.label(),
             "proportion": proportion_obj(step.proportion)}
            for step in ext.trace
        ],
    }


def _print_extension(ext, index: Optional[int] = None) -> None:
    head = f"extension {index}" if index is not None else "extension"
    if ext.conclusions:
        concl = ", ".join(sorted(str(f) for f in ext.conclusions))
        print(f"{head}: {{{concl}}}")
    else:
        print(f"{head}: (no conclusions)")
    print(f"  proportion {frac_str(ext.final_proportion)}"
          f" = {dec6(ext.final_proportion)}")
    if ext.trace:
        rows = [
            (i + 1, s.ground_rule.label(), frac_str(s.proportion),
             dec6(s.proportion))
            for i, s in enumerate(ext.trace)
        ]
        print(table(("step", "rule", "proportion", "decimal"), rows, indent="  "))


def cmd_extend(args) -> int:
    doc = _load(args.kbfile, args.domain)
    eps = (
        args.epsilon_star
        if args.epsilon_star is not None
        else doc.config.epsilon_star
    )
    evidence = doc.evidence_facts()
    if args.mode == "reiter":
        exts = reiter_extensions(doc.kb, evidence, doc.rules, args.budget)
        for i, ext in enumerate(exts, start=1):
            _print_extension(ext, i)
        results = {"mode": "reiter", "extensions": [_extension_obj(e) for e in exts]}
    else:
        order = args.order
        if order not in ("greedy", "declared"):
            order = [part.strip() for part in order.split(",") if part.strip()]
        ext = thresholded_extension(
            doc.kb, evidence, doc.rules, eps, ordering=order, budget=args.budget
        )
        _print_extension(ext)
        print(f"halted: no applicable rule clears proportion > {frac_str(1 - eps)}")
        results = {
            "mode": "threshold",
            "epsilon_star": frac_str(eps),
            "extension": _extension_obj(ext),
        }
    report = run_report(
        "extend",
        {"kbfile": args.kbfile, "mode": args.mode,
         "epsilon_star": frac_str(eps), "order": args.order,
         "domain": args.domain, "budget": args.budget},
        _kb_info(args.kbfile, doc),
        results,
    )
    write_report(args.report, report)
    return 0


def cmd_soundness(args) -> int:
    doc = _load(args.kbfile, args.domain)
    delta = args.delta if args.delta is not None else doc.config.delta
    if doc.rules:
        rules = doc.rules
        source = "declared"
    else:
        rules, _ = compile_rules(doc.kb, delta)
        source = "compiled"
    rows = []
    rule_objs = []
    all_valid = True
    for rule in rules:
        rep = delta_valid_check(rule, doc.kb, delta, bound=args.bound,
                                budget=args.budget)
        all_valid = all_valid and rep.valid
        worst_e = (
            ", ".join(str(l) for l in rep.worst_evidence)
            if rep.worst_evidence
            else "(none)"
        )
        rows.append(
            (rule.name or str(rule), "valid" if rep.valid else "VIOLATION",
             frac_str(rep.worst_proportion), dec6(rep.worst_proportion),
             worst_e)
        )
        rule_objs.append(
            {
                "name": rule.name or None,
                "rule": str(rule),
                "valid": rep.valid,
                "worst_proportion": proportion_obj(rep.worst_proportion),
                "worst_evidence": (
                    [str(l) for l in rep.worst_evidence]
                    if rep.worst_evidence
                    else None
                ),
                "worst_constant": (
                    rep.worst_constant.name if rep.worst_constant else None
                ),
                "evidence_checked": rep.evidence_checked,
                "applicable_cases": rep.applicable_cases,
            }
        )
    print(f"delta {frac_str(delta)}, {source} rules: {len(rules)}")
    if rules:
        print(table(
            ("rule", "verdict", "worst", "decimal", "worst evidence"), rows
        ))
    else:
        print("no rules to check; vacuously sound")
    report = run_report(
        "soundness",
        {"kbfile": args.kbfile, "delta": frac_str(delta),
         "bound": args.bound, "domain": args.domain, "budget": args.budget},
        _kb_info(args.kbfile, doc),
        {"rules": rule_objs, "all_valid": all_valid, "source": source},
    )
    write_report(args.report, report)
    return 0 if all_valid else 1


def cmd_lottery(args) -> int:
    uppers = None
    upper = None
    if args.intervals:
        parts = [Fraction(p.strip()) for p in args.intervals.split(",")]
        if len(parts) == 1:
            upper = parts[0]
        else:
            uppers = parts
    doc = lottery_document(
        args.n, domain_size=args.domain or 8, upper=upper, uppers=uppers,
        epsilon_star=args.epsilon_star,
    )
    text = serialize_kb(doc)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.out} (n={args.n}, domain {doc.kb.domain_size}, "
          f"delta* {frac_str(doc.config.delta)})")
    if not feasible(doc.kb):
        total = sum(st.upper for st in doc.kb.stats)
        print(
            f"error: outcome upper bounds sum to {frac_str(Fraction(total))} < 1, "
            "so no model lets any element into the reference class; "
            "the evidence B(a) is unsatisfiable at every domain size",
            file=sys.stderr,
        )
        return 2
    evidence = doc.evidence_facts()
    exts = reiter_extensions(doc.kb, evidence, doc.rules, args.budget)
    print(f"classic extensions: {len(exts)}")
    for i, ext in enumerate(exts, start=1):
        _print_extension(ext, i)
    eps = doc.config.epsilon_star
    text_ext = thresholded_extension(
        doc.kb, evidence, doc.rules, eps, budget=args.budget
    )
    print(f"thresholded run at epsilon* {frac_str(eps)}:")
    _print_extension(text_ext)
    report = run_report(
        "lottery",
        {"n": args.n, "domain": doc.kb.domain_size,
         "intervals": args.intervals, "out": args.out,
         "epsilon_star": frac_str(eps), "budget": args.budget},
        _kb_info(args.out, doc),
        {
            "delta_star": frac_str(doc.config.delta),
            "reiter": [_extension_obj(e) for e in exts],
            "threshold": _extension_obj(text_ext),
        },
    )
    write_report(args.report, report)
    return 0


def cmd_verify_oracle(args) -> int:
    doc = _load(args.kbfile, args.domain)
    world = doc.world()
    fast_count = counting.count_models(world, args.budget)
    slow_count = oracle.oracle_count(world, args.cap)
    entries = [("count", str(fast_count), str(slow_count))]
    mismatch = None
    if fast_count != slow_count:
        mismatch = "count"
    queries = []
    if fast_count > 0:
        for const in doc.kb.constants:
            for pred in doc.kb.predicates:
                queries.append(GroundFact(const, Atom(pred)))
    for q in queries:
        fast = counting.proportion(world, q, args.budget)
        slow = oracle.oracle_proportion(world, q, args.cap)
        entries.append((f"p({q})", frac_str(fast), frac_str(slow)))
        if mismatch is None and fast != slow:
            mismatch = f"p({q})"
    rows = [
        (name, fast, slow, "ok" if fast == slow else "MISMATCH")
        for name, fast, slow in entries
    ]
    print(table(("query", "counter", "oracle", "verdict"), rows))
    if mismatch:
        print(f"first mismatch: {mismatch}", file=sys.stderr)
    report = run_report(
        "verify-oracle",
        {"kbfile": args.kbfile, "domain": args.domain,
         "cap": args.cap, "budget": args.budget},
        _kb_info(args.kbfile, doc),
        {
            "checks": [
                {"query": name, "counter": fast, "oracle": slow,
                 "equal": fast == slow}
                for name, fast, slow in entries
            ],
            "all_equal": mismatch is None,
        },
    )
    write_report(args.report, report)
    return 0 if mismatch is None else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statdefaults",
        description="Exact-counting semantics for default rules over "
        "finite monadic domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kbfile=True):
        if kbfile:
            p.add_argument("kbfile", help="knowledge-base file")
        p.add_argument("--domain", type=int, default=None,
                       help="override the declared domain size")
        p.add_argument("--report", default=None,
                       help="write a JSON run report to this path")
        p.add_argument("--budget", type=int, default=counting.DEFAULT_BUDGET,
                       help="counter budget in composition vectors")

    p = sub.add_parser("generate", help="compile default rules from statistics")
    common(p)
    p.add_argument("--target", default=None,
                   help="generate for one goal formula only")
    p.add_argument("--delta", type=_fraction, default=None,
                   help="validity tolerance (defaults to the file's config)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("extend", help="compute extensions")
    common(p)
    p.add_argument("--mode", choices=("reiter", "threshold"), default="reiter")
    p.add_argument("--epsilon-star", type=_fraction, default=None,
                   dest="epsilon_star",
                   help="threshold tolerance (defaults to the file's config)")
    p.add_argument("--order", default="greedy",
                   help="threshold ordering: greedy, declared, or a "
                   "comma-separated priority list of rule names")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("soundness", help="delta-validity sweep over the rules")
    common(p)
    p.add_argument("--delta", type=_fraction, default=None)
    p.add_argument("--bound", type=int, default=100_000,
                   help="refuse when the evidence space exceeds this")
    p.set_defaults(func=cmd_soundness)

    p = sub.add_parser("lottery", help="emit and analyse the outcomes schema")
    common(p, kbfile=False)
    p.add_argument("--n", type=int, required=True, help="number of outcomes")
    p.add_argument("--intervals", default=None,
                   help="outcome upper bound, or comma-separated per-outcome "
                   "bounds (default 1/(n-1))")
    p.add_argument("--epsilon-star", type=_fraction, default=None,
                   dest="epsilon_star")
    p.add_argument("--out", default="lottery.kb",
                   help="where to write the generated KB")
    p.set_defaults(func=cmd_lottery)

    p = sub.add_parser("verify-oracle",
                       help="counter vs brute force on one file")
    common(p)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_ENUM_CAP,
                   help="brute-force enumeration cap")
    p.set_defaults(func=cmd_verify_oracle)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StatDefaultsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        elapsed = (time.perf_counter() - start) * 1000
        print(f"# elapsed {elapsed:.1f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
