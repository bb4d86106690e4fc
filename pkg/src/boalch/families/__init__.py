"""The parametric bracket family on complete graphs, its admissibility
conditions, reference fixtures and a search over coefficient grids."""

from .conditions import CATALOGUE, LEMMAS, ConditionEntry, ConditionReport, check_conditions
from .family import (
    CoefficientFamily,
    InvalidFamily,
    family_bracket_table,
    family_entry,
    family_generators,
    load_family,
    table1,
)
from .fixtures import FIXTURES, Expected, Fixture, interval_fixture, triangle_fixture, verify_fixture
from .search import brute_force_qp, free_parameters, search_admissible

__all__ = [
    "CATALOGUE",
    "LEMMAS",
    "ConditionEntry",
    "ConditionReport",
    "check_conditions",
    "CoefficientFamily",
    "InvalidFamily",
    "family_bracket_table",
    "family_entry",
    "family_generators",
    "load_family",
    "table1",
    "FIXTURES",
    "Expected",
    "Fixture",
    "interval_fixture",
    "triangle_fixture",
    "verify_fixture",
    "brute_force_qp",
    "free_parameters",
    "search_admissible",
]
