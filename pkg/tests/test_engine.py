"""Extension computation and the exhaustive rule-validity sweep."""

import random
from fractions import Fraction

import pytest

from conftest import (
    make_bird_kb,
    make_penguin_kb,
    make_penguin_wide_kb,
    make_red_conflicting_kb,
    make_red_nested_kb,
    random_formula,
)
from statdefaults.counting import count_models
from statdefaults.engine import (
    Applicability,
    GroundRule,
    applicable,
    delta_valid_check,
    extension_proportion,
    ground_rules,
    reiter_extensions,
    thresholded_extension,
)
from statdefaults.errors import (
    EmptyConditionError,
    EvidenceBoundError,
    InconsistentAxiomsError,
)
from statdefaults.forge import compile_rules
from statdefaults.formulas import Atom, ConstantSym, Not, PredicateSym
from statdefaults.kb import (
    DefaultRule,
    GroundFact,
    KnowledgeBase,
    WorldState,
    ground_facts,
    name_rules,
)
from statdefaults.lottery import lottery_document

DELTA = Fraction(3, 20)


def conclusions_str(ext):
    return sorted(str(f) for f in ext.conclusions)


def _nixon_theory():
    quaker = PredicateSym("Quaker", 0)
    repub = PredicateSym("Republican", 1)
    dove = PredicateSym("Dove", 2)
    a = ConstantSym("a", 0)
    kb = KnowledgeBase(
        predicates=(quaker, repub, dove), constants=(a,), domain_size=4
    )
    rules = name_rules(
        [
            DefaultRule(Atom(quaker), (Atom(dove),), Atom(dove)),
            DefaultRule(Atom(repub), (Not(Atom(dove)),), Not(Atom(dove))),
        ]
    )
    evidence = ground_facts((a, Atom(quaker)), (a, Atom(repub)))
    return kb, evidence, rules, a, dove


def test_applicability_trichotomy():
    kb = make_penguin_kb()
    a = kb.constants[0]
    rules, _ = compile_rules(kb, DELTA)
    guarded_bird, penguin_rule = rules
    w_pen = WorldState(kb, ground_facts((a, kb.atom("Penguin"))))
    # prerequisite Bird is entailed (axiom), but the guard not-Penguin is
    # refuted, so the bird rule is blocked rather than lacking grounds
    assert applicable(GroundRule(guarded_bird, a), w_pen) is Applicability.BLOCKED
    assert applicable(GroundRule(penguin_rule, a), w_pen) is Applicability.APPLIES
    w_empty = WorldState(kb, frozenset())
    assert (
        applicable(GroundRule(guarded_bird, a), w_empty)
        is Applicability.NO_PREREQUISITE
    )


def test_two_opposed_rules_two_extensions():
    kb, evidence, rules, a, dove = _nixon_theory()
    exts = reiter_extensions(kb, evidence, rules)
    assert len(exts) == 2
    assert [conclusions_str(e) for e in exts] == [
        ["Dove(a)"],
        ["not Dove(a)"],
    ]
    # nothing else constrains Dove, so each side gets exactly half
    assert all(e.final_proportion == Fraction(1, 2) for e in exts)
    assert all(e.mode == "reiter" for e in exts)


def test_empty_rule_set_single_trivial_extension():
    kb, evidence, _, _, _ = _nixon_theory()
    exts = reiter_extensions(kb, evidence, ())
    assert len(exts) == 1
    assert exts[0].conclusions == frozenset()
    assert exts[0].final_proportion == 1


def test_inconsistent_evidence_refused():
    kb, _, rules, a, dove = _nixon_theory()
    bad = ground_facts((a, Atom(dove)), (a, Not(Atom(dove))))
    with pytest.raises(EmptyConditionError):
        reiter_extensions(kb, bad, rules)
    with pytest.raises(EmptyConditionError):
        thresholded_extension(kb, bad, rules, Fraction(1))


def test_penguin_unique_extension_both_modes():
    kb = make_penguin_kb()
    a = kb.constants[0]
    rules, _ = compile_rules(kb, DELTA)
    evidence = ground_facts((a, kb.atom("Penguin")))
    exts = reiter_extensions(kb, evidence, rules)
    assert len(exts) == 1
    assert conclusions_str(exts[0]) == ["not Flies(a)"]
    assert exts[0].final_proportion == 1
    thr = thresholded_extension(kb, evidence, rules, DELTA)
    assert thr.conclusions == exts[0].conclusions
    assert [step.proportion for step in thr.trace] == [Fraction(1)]


def test_extension_proportion_matches_trace_free_recount():
    kb, evidence, rules, a, dove = _nixon_theory()
    exts = reiter_extensions(kb, evidence, rules)
    for ext in exts:
        assert (
            extension_proportion(ext.conclusions, kb, evidence)
            == ext.final_proportion
        )


def test_extension_proportion_of_nothing_is_one():
    kb, evidence, _, _, _ = _nixon_theory()
    assert extension_proportion(frozenset(), kb, evidence) == 1


# --- thresholded runs ---


def test_threshold_blocks_low_proportion_rules():
    kb, evidence, rules, a, dove = _nixon_theory()
    # each consequent holds in exactly half the models; demanding more
    # than 1 - 2/5 = 3/5 means nothing may fire
    ext = thresholded_extension(kb, evidence, rules, Fraction(2, 5))
    assert ext.conclusions == frozenset()
    assert ext.trace == ()
    assert ext.final_proportion == 1


def test_threshold_epsilon_one_fires_anything_positive():
    kb, evidence, rules, a, dove = _nixon_theory()
    ext = thresholded_extension(kb, evidence, rules, Fraction(1))
    # greedy tie-break takes the first-declared rule at 1/2, which then
    # blocks its opponent: the result is one of the classic extensions
    assert conclusions_str(ext) == ["Dove(a)"]
    reiter = reiter_extensions(kb, evidence, rules)
    assert any(ext.conclusions == e.conclusions for e in reiter)


def test_threshold_explicit_order_and_unlisted_rules():
    kb, evidence, rules, a, dove = _nixon_theory()
    ext = thresholded_extension(kb, evidence, rules, Fraction(1), ordering=["d2"])
    # d1 is unlisted and may never fire, even though it would clear
    assert conclusions_str(ext) == ["not Dove(a)"]
    with pytest.raises(KeyError):
        thresholded_extension(kb, evidence, rules, Fraction(1), ordering=["nope"])


def test_threshold_declared_order():
    kb, evidence, rules, a, dove = _nixon_theory()
    ext = thresholded_extension(
        kb, evidence, rules, Fraction(1), ordering="declared"
    )
    assert conclusions_str(ext) == ["Dove(a)"]


def test_threshold_trace_proportions_face_shrinking_model_sets():
    doc = lottery_document(3, upper=Fraction(2, 5))
    kb, rules = doc.kb, doc.rules
    evidence = doc.evidence_facts()
    ext = thresholded_extension(kb, evidence, rules, Fraction(1))
    # firing not-S1 (2/3 of models) then not-S2 (1/2 of the rest) leaves
    # the third exclusion impossible: its proportion is 0, never fired
    assert [s.proportion for s in ext.trace] == [Fraction(2, 3), Fraction(1, 2)]
    assert ext.final_proportion == Fraction(1, 3)
    reiter = reiter_extensions(kb, evidence, rules)
    assert any(ext.conclusions == e.conclusions for e in reiter)


def test_threshold_nonstrict_comparison():
    doc = lottery_document(3, upper=Fraction(2, 5))
    evidence = doc.evidence_facts()
    # threshold 1 - 1/2 = 1/2: the second exclusion sits exactly at 1/2,
    # so it fires only under the non-strict reading
    strict = thresholded_extension(
        doc.kb, evidence, doc.rules, Fraction(1, 2), strict=True
    )
    loose = thresholded_extension(
        doc.kb, evidence, doc.rules, Fraction(1, 2), strict=False
    )
    assert len(strict.trace) == 1
    assert len(loose.trace) == 2


def test_threshold_rejects_silly_epsilon():
    kb, evidence, rules, _, _ = _nixon_theory()
    with pytest.raises(ValueError):
        thresholded_extension(kb, evidence, rules, Fraction(0))
    with pytest.raises(ValueError):
        thresholded_extension(kb, evidence, rules, Fraction(3, 2))


# --- lottery extensions ---


def test_lottery_three_extensions_each_a_third():
    doc = lottery_document(3, upper=Fraction(2, 5))
    exts = reiter_extensions(doc.kb, doc.evidence_facts(), doc.rules)
    assert len(exts) == 3
    assert [conclusions_str(e) for e in exts] == [
        ["not S1(a)", "not S2(a)"],
        ["not S1(a)", "not S3(a)"],
        ["not S2(a)", "not S3(a)"],
    ]
    assert all(e.final_proportion == Fraction(1, 3) for e in exts)


def test_lottery_frozen_chain():
    doc = lottery_document(3, upper=Fraction(2, 5))
    base = WorldState(doc.kb, doc.evidence_facts())
    s1 = doc.kb.atom("S1")
    a = doc.kb.constants[0]
    first = GroundFact(a, Not(s1))
    assert count_models(base.assume(first)) == 36512
    assert Fraction(
        count_models(base.assume(first)), count_models(base)
    ) == Fraction(2, 3)


# --- the validity sweep ---


def test_bird_rule_survives_sweep():
    kb = make_bird_kb()
    rules, _ = compile_rules(kb, DELTA)
    report = delta_valid_check(rules[0], kb, DELTA)
    assert report.valid
    assert report.worst_proportion == Fraction(15, 106)
    assert [str(l) for l in report.worst_evidence] == ["Bird(a)"]
    assert report.evidence_checked == 9  # 3^(2 predicates * 1 constant)
    assert report.applicable_cases == 2


def test_amended_penguin_rules_survive_sweep():
    kb = make_penguin_kb()
    rules, _ = compile_rules(kb, DELTA)
    worsts = {}
    for rule in rules:
        report = delta_valid_check(rule, kb, DELTA)
        assert report.valid, str(rule)
        worsts[rule.name] = report.worst_proportion
    assert worsts["d1"] == Fraction(15, 106)
    assert worsts["d2"] == 0


def test_naive_bird_rule_fails_on_wide_penguin_theory():
    kb = make_penguin_wide_kb()
    naive = DefaultRule(
        kb.atom("Bird"), (kb.atom("Flies"),), kb.atom("Flies"), name="naive"
    )
    report = delta_valid_check(naive, kb, Fraction(2, 5))
    assert not report.valid
    assert report.worst_proportion == Fraction(5125, 5132)
    assert [str(l) for l in report.worst_evidence] == ["Penguin(a)"]


def test_amended_rules_pass_on_wide_penguin_theory():
    kb = make_penguin_wide_kb()
    rules, _ = compile_rules(kb, Fraction(2, 5))
    worsts = {}
    for rule in rules:
        report = delta_valid_check(rule, kb, Fraction(2, 5))
        assert report.valid, str(rule)
        worsts[rule.name] = report.worst_proportion
    assert worsts["d1"] == Fraction(15333, 45896)
    assert worsts["d2"] == Fraction(7, 5132)


def test_red_nested_rule_survives_red_evidence():
    kb = make_red_nested_kb()
    rules, _ = compile_rules(kb, DELTA)
    (rule,) = rules
    report = delta_valid_check(rule, kb, DELTA)
    assert report.valid
    assert report.worst_proportion == Fraction(1920, 13393)
    assert [str(l) for l in report.worst_evidence] == ["Bird(a)", "not Red(a)"]
    assert report.applicable_cases == 6


def test_red_conflicting_rule_survives_because_guarded():
    kb = make_red_conflicting_kb()
    rules, _ = compile_rules(kb, DELTA)
    (rule,) = rules
    report = delta_valid_check(rule, kb, DELTA)
    assert report.valid
    assert report.worst_proportion == Fraction(565, 3988)
    assert report.applicable_cases == 4


def test_lottery_exclusions_fail_sweep_at_compound_evidence():
    # Each exclusion is safe at the bare reference evidence (error 1/3)
    # but not universally: once two outcomes are denied the third is
    # forced, and intermediate evidence such as {B(a), not S3(a)} already
    # pushes the error of "not S1" to 1/2 > 2/5. Individually plausible
    # rules jointly overcommit; the sweep exists to catch exactly this.
    doc = lottery_document(3, upper=Fraction(2, 5))
    report = delta_valid_check(doc.rules[0], doc.kb, Fraction(2, 5))
    assert not report.valid
    assert report.worst_proportion == Fraction(1, 2)
    worst = set(str(l) for l in report.worst_evidence)
    assert worst == {"B(a)", "not S3(a)"} or worst == {"B(a)", "not S2(a)"}


def test_sweep_refuses_oversized_evidence_spaces():
    kb = make_penguin_kb()
    rules, _ = compile_rules(kb, DELTA)
    with pytest.raises(EvidenceBoundError):
        delta_valid_check(rules[0], kb, DELTA, bound=10)


def test_sweep_strict_mode_flips_boundary_cases():
    kb = make_bird_kb()
    rules, _ = compile_rules(kb, DELTA)
    at_worst = delta_valid_check(rules[0], kb, Fraction(15, 106))
    assert at_worst.valid  # inclusive by default
    strict = delta_valid_check(rules[0], kb, Fraction(15, 106), strict=True)
    assert not strict.valid


# --- ordering-free degeneration property ---


def test_epsilon_one_threshold_lands_on_a_reiter_extension():
    rng = random.Random(99)
    done = 0
    while done < 25:
        k = rng.randint(1, 3)
        preds = tuple(PredicateSym(f"P{i}", i) for i in range(k))
        consts = tuple(
            ConstantSym(f"c{i}", i) for i in range(rng.randint(1, 2))
        )
        kb = KnowledgeBase(
            predicates=preds, constants=consts, domain_size=rng.randint(1, 6)
        )
        rules = []
        for _ in range(rng.randint(1, 3)):
            concl = random_formula(rng, preds, 1)
            prereq = random_formula(rng, preds, 1)
            rules.append(DefaultRule(prereq, (concl,), concl))
        rules = name_rules(rules)
        evidence = frozenset(
            GroundFact(c, random_formula(rng, preds, 1))
            for c in consts
            if rng.random() < 0.6
        )
        if count_models(WorldState(kb, evidence)) == 0:
            continue
        done += 1
        thr = thresholded_extension(kb, evidence, rules, Fraction(1))
        classic = reiter_extensions(kb, evidence, rules)
        assert any(thr.conclusions == e.conclusions for e in classic)
