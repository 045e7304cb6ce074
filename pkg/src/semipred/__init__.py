"""Finite semigroups and groups as relational structures.

Decides whether every direct power of a semigroup's predicatization is
equationally Noetherian (two cancellation-transfer quasi-identities), solves
and reduces equation systems over finite direct powers, and surveys all
semigroups of small order.
"""

from .classify import (
    ClassificationReport,
    QiResult,
    SurveyOutcome,
    check_left_qi,
    check_right_qi,
    classify,
    enumerate_semigroups,
    survey,
)
from .powers import (
    PowerStructure,
    check_consistency,
    counterexample_chain,
    decompose,
    power,
    project_equation,
    project_system,
    reduce_to_finite,
    solve_power,
)
from .relational import (
    Const,
    Equality,
    EquationSystem,
    Relation,
    RelationalStructure,
    SolutionSet,
    Var,
    compile_word_equations,
    parse_system,
    parse_words,
    predicatize_group,
    predicatize_semigroup,
    project_solutions,
    solve,
    systems_equivalent,
)
from .semigroup import (
    GroupView,
    LabeledSemigroup,
    ReesSpec,
    Semigroup,
    as_group,
    coordinatize_simple,
    idempotents,
    is_homogroup,
    is_quasigroup,
    is_rectangular_band_of_groups,
    is_simple,
    kernel,
    multiply,
    reducible,
    rees_construct,
    semigroup_from_table,
    verify_homogroup_center,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "Const",
    "Equality",
    "EquationSystem",
    "GroupView",
    "LabeledSemigroup",
    "PowerStructure",
    "QiResult",
    "ReesSpec",
    "Relation",
    "RelationalStructure",
    "Semigroup",
    "SolutionSet",
    "SurveyOutcome",
    "Var",
    "as_group",
    "check_consistency",
    "check_left_qi",
    "check_right_qi",
    "classify",
    "compile_word_equations",
    "coordinatize_simple",
    "counterexample_chain",
    "decompose",
    "enumerate_semigroups",
    "idempotents",
    "is_homogroup",
    "is_quasigroup",
    "is_rectangular_band_of_groups",
    "is_simple",
    "kernel",
    "multiply",
    "parse_system",
    "parse_words",
    "power",
    "predicatize_group",
    "predicatize_semigroup",
    "project_equation",
    "project_solutions",
    "project_system",
    "reduce_to_finite",
    "reducible",
    "rees_construct",
    "semigroup_from_table",
    "solve",
    "solve_power",
    "survey",
    "systems_equivalent",
    "verify_homogroup_center",
]
