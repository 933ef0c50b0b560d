"""Exact computations for Rota-Baxter operators on involutive associative algebras."""

from __future__ import annotations

from .algebra import (
    InvolutiveAlgebra,
    InvolutiveBimodule,
    ShapeError,
    ValidationReport,
    regular_bimodule,
    semidirect_product,
    validate_algebra,
    validate_bimodule,
    zero_bimodule,
)
from .deformation import (
    DeformationSeries,
    EquivalenceData,
    check_deformation,
    check_equivalence,
    infinitesimal,
    obstruction,
    shift_by_coboundary,
    try_extend,
)
from .dendriform import (
    DendriformAlgebra,
    dend_bracket,
    dend_cohomology,
    dend_differential,
    operad_compose,
    theta,
    validate_dendriform,
)
from .freerb import (
    Bracket,
    FreeRBElement,
    FreeRotaBaxter,
    StructureAlgebra,
    TensorAlgebra,
    enveloping_relations,
    rb_apply,
    word_involution,
    word_product,
    word_stats,
)
from .hochschild import gerstenhaber_bracket, hochschild_cohomology, hochschild_differential
from .io import load_document, load_fixture
from .linalg import inverse, kernel_basis, rank, rational, solve
from .rota_baxter import (
    RBOperator,
    check_relative_rb,
    derived_bracket,
    gauge_transform,
    graph_check,
    induced_dendriform,
    rb_cohomology,
    rb_differential,
)
from .wordparse import parse_expression, parse_word

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "DeformationSeries",
    "DendriformAlgebra",
    "EquivalenceData",
    "FreeRBElement",
    "FreeRotaBaxter",
    "InvolutiveAlgebra",
    "InvolutiveBimodule",
    "RBOperator",
    "ShapeError",
    "StructureAlgebra",
    "TensorAlgebra",
    "ValidationReport",
    "check_deformation",
    "check_equivalence",
    "check_relative_rb",
    "dend_bracket",
    "dend_cohomology",
    "dend_differential",
    "derived_bracket",
    "enveloping_relations",
    "gauge_transform",
    "gerstenhaber_bracket",
    "graph_check",
    "hochschild_cohomology",
    "hochschild_differential",
    "induced_dendriform",
    "infinitesimal",
    "inverse",
    "kernel_basis",
    "load_document",
    "load_fixture",
    "obstruction",
    "operad_compose",
    "parse_expression",
    "parse_word",
    "rank",
    "rational",
    "rb_apply",
    "rb_cohomology",
    "rb_differential",
    "regular_bimodule",
    "semidirect_product",
    "shift_by_coboundary",
    "solve",
    "theta",
    "try_extend",
    "validate_algebra",
    "validate_bimodule",
    "validate_dendriform",
    "word_involution",
    "word_product",
    "word_stats",
    "zero_bimodule",
]
