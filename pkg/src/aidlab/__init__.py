"""Exact derivation computations for twisted loop algebras and their affinizations."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    K,
    AlgSpec,
    BasisVec,
    Elem,
    Kind,
    Variant,
    bracket,
    domain_basis,
    h,
    make_spec,
    x,
)
from .kernel import LPoly, Rat  # noqa: E402
from .textio import ParityError, ParseError, VariantError, format_element, parse_element  # noqa: E402

__all__ = [
    "__version__",
    "K",
    "AlgSpec",
    "BasisVec",
    "Elem",
    "Kind",
    "Variant",
    "bracket",
    "domain_basis",
    "h",
    "make_spec",
    "x",
    "LPoly",
    "Rat",
    "ParseError",
    "ParityError",
    "VariantError",
    "format_element",
    "parse_element",
]
