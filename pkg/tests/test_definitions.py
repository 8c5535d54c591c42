import random
import warnings
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import random_kb

from gdcheck.definitions import (
    VacuousMembershipWarning,
    expand_defined_class,
    membership,
)
from gdcheck.errors import CategoryError, UnknownNameError
from gdcheck.evaluator import eliminate_defined, evaluate
from gdcheck.logic import DefinedAtom, Var
from gdcheck.profiles import AMENDED, check
from gdcheck.syntax import parse_formula, parse_kb
from gdcheck.taxonomy import Taxonomy


def test_expand_scary_is_definition_two():
    d = expand_defined_class("Scary")
    assert d.name == "GDC-Scary" and d.distinguished_var == "x"
    assert d.body == parse_formula(
        "GDC(?x) & forall ?y (carrier_of(?y, ?x) -> exists ?z (Scary(?z) & inheres_in(?z, ?y)))")


def test_expand_ornate_is_definition_four():
    d = expand_defined_class("Ornate", Taxonomy([("Ornate", "Quality")]))
    assert d.name == "GDC-Ornate"
    assert d.body == parse_formula(
        "GDC(?x) & forall ?y (carrier_of(?y, ?x) -> exists ?z (Ornate(?z) & inheres_in(?z, ?y)))")


def test_expand_is_deterministic():
    assert expand_defined_class("Role") == expand_defined_class("Role")


@pytest.mark.parametrize("name", ["MaterialEntity", "GDC", "Process", "Site", "Entity"])
def test_expand_rejects_non_dependent_kinds(name):
    with pytest.raises(CategoryError):
        expand_defined_class(name)


def test_expand_checks_declared_classes():
    tax = Taxonomy([("Shiny", "MaterialEntity")])
    with pytest.raises(CategoryError):
        expand_defined_class("Shiny", tax)
    with pytest.raises(UnknownNameError):
        expand_defined_class("Undeclared", tax)


HANSEL = """
class Scary : Disposition
entity hansel_gretel : GDC
entity book : MaterialEntity
entity tablet : MaterialEntity
entity ink : Quality
entity pixels : Quality
entity fear_book : Scary
entity fear_tablet : Scary
fact inheres_in(ink, book)
fact concretizes(ink, hansel_gretel)
fact inheres_in(pixels, tablet)
fact concretizes(pixels, hansel_gretel)
fact inheres_in(fear_book, book)
fact inheres_in(fear_tablet, tablet)
entity lonely_poem : GDC
defclass GDC-Scary from Scary
"""


def test_membership_all_carriers_scary():
    kb = parse_kb(HANSEL)
    d = kb.definitions["GDC-Scary"]
    assert membership(kb, d, "hansel_gretel")
    assert not membership(kb, d, "book")


def test_membership_fails_when_a_carrier_is_not_scary():
    kb = parse_kb(HANSEL.replace("fact inheres_in(fear_tablet, tablet)\n", ""))
    assert not membership(kb, kb.definitions["GDC-Scary"], "hansel_gretel")


def test_vacuous_membership_warns():
    kb = parse_kb(HANSEL)
    with pytest.warns(VacuousMembershipWarning):
        assert membership(kb, kb.definitions["GDC-Scary"], "lonely_poem")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        membership(kb, kb.definitions["GDC-Scary"], "hansel_gretel")


def test_coca_cola_reduction_fails(corpus):
    kb = corpus("coca_cola.kb")
    d = kb.definitions["GDC-OwnedByCompany"]
    assert not membership(kb, d, "coca_cola_logo")
    assert kb.holds("owned_by_quality_of", "coca_cola_logo", "coca_cola_company")
    assert check(kb, AMENDED) == []


def test_coca_cola_flip(corpus):
    kb = corpus("coca_cola.kb")
    ents = [replace(e, category="OwnedByCompany") if e.id == "bottle_ownership" else e
            for e in kb.entities]
    flipped = replace(kb, entities=ents)
    assert membership(flipped, flipped.definitions["GDC-OwnedByCompany"], "coca_cola_logo")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_membership_agrees_with_elimination(seed):
    rng = random.Random(seed)
    kb = random_kb(rng, max_entities=8, max_facts=40, dc_names=("Scary", "Quality", "Role"))
    for d in kb.defined_classes:
        for e in kb.entities:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", VacuousMembershipWarning)
                direct = membership(kb, d, e.id)
            expanded = eliminate_defined(DefinedAtom(d.name, Var("q")), kb.defined_classes)
            assert direct == evaluate(kb, expanded, {"q": e.id})
