"""An engine for the calculus of labeled combinatorial structures.

A species expression describes a family of structures that can be put on any
finite set of labels.  The package computes the exact counting series of an
expression (including ones defined by recursive equations), lists every
structure on a concrete label set, relabels structures along bijections, and
ships a verification suite of classical counting identities.
"""

from .errors import (
    BudgetExceeded,
    DomainMismatch,
    DuplicateName,
    IllFoundedEquation,
    NonIntegerCount,
    NonemptyInnerOnEmptySet,
    NonzeroConstantTerm,
    NotABijection,
    OrderExceeded,
    ParseError,
    RecursionGuard,
    SpeciesError,
    UnboundName,
    ZeroConstantDivisor,
)
from .series import CountSeries, solve_system
from .expr import (
    Derivative,
    Environment,
    Name,
    Pointing,
    Primitive,
    PrimitiveKind,
    Product,
    RestrictCard,
    Substitute,
    Sum,
    print_expr,
)
from .parser import parse_defs, parse_expr
from .semantics import DEFAULT_ORDER, ValidationReport, egf_of, primitive_series, validate
from .structures import (
    STAR,
    Bijection,
    Block,
    CompTerm,
    CycleTerm,
    DerivTerm,
    DigraphTerm,
    GraphTerm,
    ListTerm,
    MapTerm,
    NamedTerm,
    PartitionTerm,
    PointTerm,
    ProdTerm,
    SetTerm,
    Structure,
    SubsetTerm,
    SumTerm,
    decode_structure,
)
from .enumerator import (
    DEFAULT_BUDGET,
    FunctorialityReport,
    check_functoriality,
    cycles_to_permutation,
    decompose_permutation,
    enumerate_structures,
    permutation_to_cycles,
    recompose_permutation,
    transport,
)
from .identities import (
    SUITE_NOTE,
    VerificationReport,
    catalog,
    run_suite,
    verify_enumerative,
    verify_series,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DomainMismatch",
    "DuplicateName",
    "IllFoundedEquation",
    "NonIntegerCount",
    "NonemptyInnerOnEmptySet",
    "NonzeroConstantTerm",
    "NotABijection",
    "OrderExceeded",
    "ParseError",
    "RecursionGuard",
    "SpeciesError",
    "UnboundName",
    "ZeroConstantDivisor",
    "CountSeries",
    "solve_system",
    "Derivative",
    "Environment",
    "Name",
    "Pointing",
    "Primitive",
    "PrimitiveKind",
    "Product",
    "RestrictCard",
    "Substitute",
    "Sum",
    "print_expr",
    "parse_defs",
    "parse_expr",
    "DEFAULT_ORDER",
    "ValidationReport",
    "egf_of",
    "primitive_series",
    "validate",
    "STAR",
    "Bijection",
    "Block",
    "CompTerm",
    "CycleTerm",
    "DerivTerm",
    "DigraphTerm",
    "GraphTerm",
    "ListTerm",
    "MapTerm",
    "NamedTerm",
    "PartitionTerm",
    "PointTerm",
    "ProdTerm",
    "SetTerm",
    "Structure",
    "SubsetTerm",
    "SumTerm",
    "decode_structure",
    "DEFAULT_BUDGET",
    "FunctorialityReport",
    "check_functoriality",
    "cycles_to_permutation",
    "decompose_permutation",
    "enumerate_structures",
    "permutation_to_cycles",
    "recompose_permutation",
    "transport",
    "SUITE_NOTE",
    "VerificationReport",
    "catalog",
    "run_suite",
    "verify_enumerative",
    "verify_series",
    "__version__",
]
