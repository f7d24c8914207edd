"""Exact tensor calculus for contact pseudo-metric structures and η-Ricci solitons."""
from .contact import (
    INDETERMINATE,
    ClassificationResult,
    ContactStructure,
    StructureReport,
    classify,
    compute_ell,
    compute_h,
    d_homothetic_deform,
    verify_contact_condition,
    verify_structure,
)
from .document import dump_document, load_manifold
from .soliton import (
    SolitonData,
    SolitonVerdict,
    TheoremReport,
    builtin_example,
    gradient_soliton_residual,
    soliton_residual,
)
from .symbolic import RationalFunction, parse_expression
from .tensor import Chart, Geometry, TensorField

__version__ = "0.1.0"
