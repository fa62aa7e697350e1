"""Logic-program evaluation as parameterized inductive definitions.

Programs are sets of rule templates standing for their ground instances;
a parameter set seeds the least closed set, computed bottom-up by the
engine or witnessed top-down by justification sequences.
"""

from .components import (
    AllowabilityReport,
    ComponentSignature,
    check_allowable,
    compose,
    satisfies,
    signature,
    stratify,
)
from .engine import (
    GroundRule,
    Limits,
    ModelSet,
    apply_T,
    dump_model,
    least_fixpoint,
    query,
)
from .errors import IndsemError, ParseError, ResourceLimitError, UnstratifiableError
from .justify import Justification, ParamWitness, RuleWitness, prove, verify
from .meta import builtin_rules, call_rule, synthesize_clause_facts, wrap
from .oracle import FiniteUniverse, minimality_check, naive_least_closed, preground
from .parser import (
    Program,
    RuleTemplate,
    parse_paramset,
    parse_program,
    parse_query,
    parse_term,
)
from .terms import Compound, Term, Var, compare_ground, match, term_to_str, unify

__all__ = [
    "AllowabilityReport",
    "ComponentSignature",
    "Compound",
    "FiniteUniverse",
    "GroundRule",
    "IndsemError",
    "Justification",
    "Limits",
    "ModelSet",
    "ParamWitness",
    "ParseError",
    "Program",
    "ResourceLimitError",
    "RuleTemplate",
    "RuleWitness",
    "Term",
    "UnstratifiableError",
    "Var",
    "apply_T",
    "builtin_rules",
    "call_rule",
    "check_allowable",
    "compare_ground",
    "compose",
    "dump_model",
    "least_fixpoint",
    "match",
    "minimality_check",
    "naive_least_closed",
    "parse_paramset",
    "parse_program",
    "parse_query",
    "parse_term",
    "preground",
    "prove",
    "query",
    "satisfies",
    "signature",
    "stratify",
    "synthesize_clause_facts",
    "term_to_str",
    "unify",
    "verify",
    "wrap",
]

__version__ = "0.1.0"
