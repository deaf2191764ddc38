"""Cube categories over interval theories.

Terms under structural rules, equality decided in small finite algebras,
hom-set enumeration, finite categories with nerve homology, and the
obstruction posets over the square.
"""

from __future__ import annotations

from .algebras import (
    DIAMOND,
    THREE,
    TWO,
    FiniteAlgebra,
    Theory,
    axiom_soundness,
    decision_algebra,
    free_algebra,
    terms_equal,
)
from .category import (
    CubeCategory,
    Morphism,
    compose,
    enumerate_hom,
    factorize,
    identity,
    is_iso,
    morphism,
    morphisms_equal,
    tensor,
)
from .experiments import (
    build_A,
    build_slice_fragment,
    coslice_initial_check,
    contraction_collapse,
    table2_report,
    verify_A_homotopy,
)
from .fincat import FinCat, build_fincat, fincat_homology, nerve, poset
from .homology import smith_normal_form
from .terms import Language, Signature, StructuralRules, parse_term

__version__ = "0.1.0"

__all__ = [
    "DIAMOND", "THREE", "TWO", "FiniteAlgebra", "Theory", "axiom_soundness", "decision_algebra",
    "free_algebra", "terms_equal", "CubeCategory", "Morphism", "compose", "enumerate_hom",
    "factorize", "identity", "is_iso", "morphism", "morphisms_equal", "tensor", "build_A",
    "build_slice_fragment", "coslice_initial_check", "contraction_collapse", "table2_report",
    "verify_A_homotopy", "FinCat", "build_fincat", "fincat_homology", "nerve", "poset",
    "smith_normal_form", "Language", "Signature", "StructuralRules", "parse_term",
]
