"""Exit criteria.  Each test is one criterion; a summary prints at the end of the run."""

import io
import itertools
import json
import random
import warnings
from dataclasses import replace

import pytest
from conftest import CORPUS
from oracles import (
    brute_force_carriers,
    enumerate_formulas,
    oracle_evaluate,
    random_formula,
    random_kb,
)

from gdcheck.cli import main
from gdcheck.definitions import VacuousMembershipWarning, membership
from gdcheck.evaluator import eliminate_defined, evaluate
from gdcheck.kb import Entity, Fact, KnowledgeBase, derive_carriers
from gdcheck.logic import Atom, Equals, Var, defined_names, free_vars
from gdcheck.profiles import AMENDED, ERROR, STRICT, check
from gdcheck.report import parse_report_json, serialize_report
from gdcheck.scenario import Scenario, classify_realizable
from gdcheck.syntax import parse_formula, parse_kb, print_formula, serialize_kb

criterion = pytest.mark.criterion


def _cli(*argv):
    import sys
    out = io.StringIO()
    old = sys.stdout
    sys.stdout = out
    try:
        code = main(list(argv))
    finally:
        sys.stdout = old
    return code, out.getvalue()


@criterion("1", "corpus asymmetry: strict 3 errors on the three GDCs, amended 0")
def test_corpus_asymmetry(corpus):
    code, out = _cli("check", str(CORPUS / "paper_examples.kb"), "--profile", "strict",
                     "--format", "json")
    records = json.loads(out)
    assert code == 1
    assert len(records) == 3 and all(r["severity"] == ERROR for r in records)
    assert {r["witnesses"]["y"] for r in records} == {"protege", "hansel_gretel", "bundesgesetzblatt"}
    code, out = _cli("check", str(CORPUS / "paper_examples.kb"), "--profile", "amended",
                     "--format", "json")
    assert (code, json.loads(out)) == (0, [])
    assert check(corpus("paper_examples.kb"), AMENDED) == []


DC_NAMES = ("Scary", "Ornate", "Quality", "Role", "Disposition")
DEFINED = tuple(f"GDC-{n}" for n in DC_NAMES)


@criterion("2", "eliminability: 200 random (KB, formula) pairs, zero mismatches")
def test_eliminability():
    rng = random.Random(2)
    mismatches, outcomes, pairs = 0, set(), 0
    while pairs < 200:
        kb = random_kb(rng, max_entities=8, max_facts=50, dc_names=DC_NAMES)
        if not kb.entities:
            continue
        ids = [e.id for e in kb.entities]
        f = random_formula(rng, 4, constants=ids, defined=DEFINED)
        if not defined_names(f):
            continue
        binding = {v: rng.choice(ids) for v in free_vars(f)}
        expanded = eliminate_defined(f, kb.defined_classes)
        assert not defined_names(expanded)
        direct = evaluate(kb, f, binding)
        mismatches += direct != evaluate(kb, expanded, binding)
        outcomes.add(direct)
        pairs += 1
    assert mismatches == 0
    assert outcomes == {True, False}


def _small_structures():
    cats = ("GenericallyDependentContinuant", "MaterialEntity", "Quality")
    out = []
    for gdc, loop in itertools.product((True, False), repeat=2):
        out.append(KnowledgeBase([Entity("a", cats[0] if gdc else cats[1])], (),
                                 [Fact("inheres_in", "a", "a")] if loop else []))
    rng = random.Random(3)
    for n in (2, 3, 4):
        for _ in range(3):
            ents = [Entity(f"e{i}", rng.choice(cats)) for i in range(n)]
            facts = [Fact("inheres_in", a.id, b.id) for a in ents for b in ents if rng.random() < 0.4]
            out.append(KnowledgeBase(ents, (), facts))
    return out


@criterion("3", "evaluator soundness: exhaustive depth<=3 / domain<=4, plus 1000 random cases")
def test_evaluator_soundness():
    x, y = Var("x"), Var("y")
    atoms = [Atom("GDC", (x,)), Atom("inheres_in", (x, y)), Equals(x, y)]
    formulas = enumerate_formulas(3, atoms)
    structures = _small_structures()
    disagreements = checked = 0
    for kb in structures:
        ids = [e.id for e in kb.entities]
        for i, f in enumerate(formulas):
            names = sorted(free_vars(f))
            binding = {v: ids[(i + j) % len(ids)] for j, v in enumerate(names)}
            disagreements += evaluate(kb, f, binding) != oracle_evaluate(kb, f, binding)
            checked += 1
    assert len(formulas) == 11937 and checked == len(formulas) * len(structures)

    rng = random.Random(33)
    larger = 0
    while larger < 1000:
        kb = random_kb(rng, max_entities=10, max_facts=60, dc_names=("Scary",))
        if len(kb.entities) < 5:
            continue
        ids = [e.id for e in kb.entities]
        f = random_formula(rng, 5, constants=ids, defined=("GDC-Scary",))
        binding = {v: rng.choice(ids) for v in free_vars(f)}
        disagreements += evaluate(kb, f, binding) != oracle_evaluate(kb, f, binding)
        larger += 1
    assert disagreements == 0


@criterion("4", "carrier derivation equals triple enumeration on 100 random KBs")
def test_carrier_derivation():
    rng = random.Random(4)
    mismatches = 0
    for _ in range(100):
        kb = random_kb(rng, max_entities=30, max_facts=200)
        assert len(kb.entities) <= 30 and len(kb.facts) <= 200 + 3 * len(kb.timeline)
        mismatches += set(derive_carriers(kb)) != brute_force_carriers(kb)
    assert mismatches == 0


@criterion("5", "Coca-Cola: defined-class membership fails, direct ownership stands; flip restores")
def test_coca_cola(corpus):
    kb = corpus("coca_cola.kb")
    d = kb.definitions["GDC-OwnedByCompany"]
    assert membership(kb, d, "coca_cola_logo") is False
    assert kb.holds("owned_by_quality_of", "coca_cola_logo", "coca_cola_company")
    assert kb.holds("inheres_in", "logo_ownership", "coca_cola_logo")
    assert check(kb, AMENDED) == []
    flipped = parse_kb((CORPUS / "coca_cola.kb").read_text().replace(
        "entity bottle_ownership : OwnedByCustomer", "entity bottle_ownership : OwnedByCompany"))
    with warnings.catch_warnings():
        warnings.simplefilter("error", VacuousMembershipWarning)
        assert membership(flipped, flipped.definitions["GDC-OwnedByCompany"], "coca_cola_logo")


@criterion("6", "realization constraint: storytelling satisfies A4; removing both links gives one A4")
def test_realization_constraint(corpus):
    kb = corpus("storytelling.kb")
    assert [v for v in check(kb, AMENDED) if v.axiom == "A4"] == []
    gone = {Fact("part_of", "telling", "storytelling"),
            Fact("participates_in", "grimm_book", "storytelling")}
    assert gone <= set(kb.facts)
    broken = replace(kb, facts=[f for f in kb.facts if f not in gone])
    a4 = [v for v in check(broken, AMENDED) if v.axiom == "A4"]
    assert len(a4) == 1 and a4[0].binding["p"] == "storytelling"


def _with_noise(kb):
    ents = [Entity(f"unrelated{i}", "MaterialEntity") for i in range(6)]
    facts = [Fact("part_of", f"unrelated{i}", f"unrelated{i + 1}") for i in range(5)]
    return replace(kb, entities=[*kb.entities, *ents], facts=[*kb.facts, *facts])


@criterion("7", "scenario classification: cave/boundary/story verdicts, stable under 5 irrelevant facts")
def test_scenario_classification(corpus):
    expected = {
        "cave": ("collapse_disposition", "disposition_consistent", ("retainer_quality_change",)),
        "boundary": ("demarcation_role", "role_consistent", ("none",)),
        "story": ("scare_disposition", "disposition_consistent", ("mereotopology_change",)),
    }
    for name, (focus, verdict, evidence) in expected.items():
        s = Scenario(corpus(f"{name}_before.kb"), corpus(f"{name}_after.kb"), focus)
        c = classify_realizable(s)
        assert (c.verdict, c.evidence) == (verdict, evidence), name
        for side in ("before", "after"):
            noisy = replace(s, **{side: _with_noise(getattr(s, side))})
            assert classify_realizable(noisy) == c, (name, side)


@criterion("8", "round trips: 500 KBs, 1000 formulas, JSON reports")
def test_round_trips(corpus):
    rng = random.Random(8)
    for _ in range(500):
        kb = random_kb(rng, dc_names=("Scary", "Role"))
        text = serialize_kb(kb)
        assert parse_kb(text) == kb and serialize_kb(parse_kb(text)) == text
    for _ in range(1000):
        f = random_formula(rng, 6, constants=("a", "b-c"), defined=("GDC-Scary",))
        text = print_formula(f)
        assert parse_formula(text) == f and print_formula(parse_formula(text)) == text
    for name in sorted(p.name for p in CORPUS.glob("*.kb")):
        for profile in (STRICT, AMENDED):
            report = check(corpus(name), profile)
            assert parse_report_json(serialize_report(report, "json")) == report
