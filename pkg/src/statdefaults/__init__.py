"""Exact model counting semantics for default rules over finite monadic domains.

The package counts, exactly, the finite models of a monadic knowledge base
whose statistics constrain class proportions, and uses those counts to
generate default rules that provably keep the chance of a wrong conclusion
below a tolerance, and to run extension computation (classic and
proportion-thresholded) whose every step carries a verified number.
"""

from .counting import (
    CountBudgetError,
    consistent,
    count_models,
    entails,
    feasible_cells,
    proportion,
)
from .engine import (
    Applicability,
    DeltaReport,
    Extension,
    GroundRule,
    TraceStep,
    delta_valid_check,
    extension_proportion,
    ground_rules,
    reiter_extensions,
    thresholded_extension,
)
from .errors import (
    EmptyConditionError,
    EnumerationCapError,
    EvidenceBoundError,
    InconsistentAxiomsError,
    NoStatsError,
    ParseError,
    SchemaError,
    StatDefaultsError,
    UndeclaredSymbolError,
)
from .forge import (
    CandidateSet,
    compile_rules,
    filter_by_delta,
    generate_candidates,
    generate_lottery_defaults,
    goal_formulas,
)
from .formulas import And, Atom, Iff, Implies, Not, Or, fmt
from .kb import (
    DefaultRule,
    GeneratedOrigin,
    GroundFact,
    GroundLiteral,
    KBDocument,
    KnowledgeBase,
    StatStatement,
    ThresholdConfig,
    WorldState,
    ground_facts,
    name_rules,
)
from .dsl import parse_formula, parse_kb, serialize_kb
from .lottery import default_upper, feasible, lottery_document, lottery_kb
from .oracle import (
    ExplicitModel,
    count_by_enumeration,
    enumerate_models,
    oracle_count,
    oracle_proportion,
    oracle_satisfies,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Applicability",
    "Atom",
    "CandidateSet",
    "CountBudgetError",
    "DefaultRule",
    "DeltaReport",
    "EmptyConditionError",
    "EnumerationCapError",
    "EvidenceBoundError",
    "ExplicitModel",
    "Extension",
    "GeneratedOrigin",
    "GroundFact",
    "GroundLiteral",
    "GroundRule",
    "Iff",
    "Implies",
    "InconsistentAxiomsError",
    "KBDocument",
    "KnowledgeBase",
    "NoStatsError",
    "Not",
    "Or",
    "ParseError",
    "SchemaError",
    "StatDefaultsError",
    "StatStatement",
    "ThresholdConfig",
    "TraceStep",
    "UndeclaredSymbolError",
    "WorldState",
    "compile_rules",
    "consistent",
    "count_by_enumeration",
    "count_models",
    "default_upper",
    "delta_valid_check",
    "entails",
    "enumerate_models",
    "extension_proportion",
    "feasible",
    "feasible_cells",
    "filter_by_delta",
    "fmt",
    "generate_candidates",
    "generate_lottery_defaults",
    "goal_formulas",
    "ground_facts",
    "ground_rules",
    "lottery_document",
    "lottery_kb",
    "name_rules",
    "oracle_count",
    "oracle_proportion",
    "oracle_satisfies",
    "parse_formula",
    "parse_kb",
    "proportion",
    "reiter_extensions",
    "serialize_kb",
    "thresholded_extension",
]
