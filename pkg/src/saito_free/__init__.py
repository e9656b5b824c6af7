"""Exact computations around free hypersurfaces: Jacobian syzygies, Saito's
criterion, eigenschemes of partially symmetric tensors, and free pencils."""

__version__ = "0.1.0"

from .derivation import Derivation, apply, parse_derivation
from .eigenschemes import (
    SchemeReport,
    Tensor,
    eigenscheme_ideal,
    expected_length,
    expected_me_degree,
    me_scheme_ideal,
    parse_tensor,
    point_membership,
    scheme_report,
)
from .groebner import Ideal, groebner_basis, hilbert_data, ideal_membership, lift, normal_form
from .polymatrix import PolyMatrix, determinant, determinant_derivation, maximal_minors, minors
from .polyring import GF, QQ, Field, Poly, Ring, euler_apply, exact_divide, gradient, parse_poly, partial_derivative
from .saito import contains_me_scheme, in_der, saito_test
from .syzmod import FreenessReport, decide_freeness, mdr, minimalize, syzygy_generators

__all__ = [
    "Derivation", "apply", "parse_derivation", "SchemeReport", "Tensor", "eigenscheme_ideal",
    "expected_length", "expected_me_degree", "me_scheme_ideal", "parse_tensor", "point_membership",
    "scheme_report", "Ideal", "groebner_basis", "hilbert_data", "ideal_membership", "lift",
    "normal_form", "PolyMatrix", "determinant", "determinant_derivation", "maximal_minors", "minors",
    "GF", "QQ", "Field", "Poly", "Ring", "euler_apply", "exact_divide", "gradient", "parse_poly",
    "partial_derivative", "contains_me_scheme", "in_der", "saito_test", "FreenessReport",
    "decide_freeness", "mdr", "minimalize", "syzygy_generators",
]
