"""Finite-model validator for BFO-style knowledge bases with generically dependent continuants."""

from .definitions import expand_defined_class, membership
from .evaluator import eliminate_defined, evaluate, find_witnesses
from .kb import Entity, Fact, KnowledgeBase, TimePoint, derive_carriers, exists_at
from .profiles import AMENDED, STRICT, Violation, check, check_realization_constraint
from .report import parse_report_json, serialize_report
from .scenario import Classification, Scenario, check_scenarios, classify_realizable
from .syntax import parse_formula, parse_kb, print_formula, serialize_kb
from .taxonomy import subsumes

__all__ = [
    "AMENDED", "STRICT", "Classification", "Entity", "Fact", "KnowledgeBase", "Scenario",
    "TimePoint", "Violation", "check", "check_realization_constraint", "check_scenarios",
    "classify_realizable", "derive_carriers", "eliminate_defined", "evaluate", "exists_at",
    "expand_defined_class", "find_witnesses", "membership", "parse_formula", "parse_kb",
    "parse_report_json", "print_formula", "serialize_kb", "serialize_report", "subsumes",
]
