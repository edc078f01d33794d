"""Exact discrete Clifford operational calculus on the lattice hZ^n."""
from .clifford import DimensionError, Multivector, as_rational, format_rational
from .poly import CliffordPolynomial, falling_factorial, l1_level_points, poly_eval
from .series import (
    Bernoulli2,
    Charlier,
    CliffordHermite2h,
    CustomCoefficients,
    Falling,
    SeriesDomainError,
    TruncatedSeries,
)
from .operators import op_apply, op_equal_truncated, op_matrix, relations_suite
from .appell import (
    AppellFamilySpec,
    appell_sequence,
    appell_verify,
    appell_w,
    family,
    mu_table,
    quasi_monomial,
    rodrigues_w,
)

__all__ = [
    "AppellFamilySpec", "Bernoulli2", "Charlier", "CliffordHermite2h", "CliffordPolynomial",
    "CustomCoefficients", "DimensionError", "Falling", "Multivector", "SeriesDomainError",
    "TruncatedSeries", "appell_sequence", "appell_verify", "appell_w", "as_rational",
    "falling_factorial", "family", "format_rational", "l1_level_points", "mu_table",
    "op_apply", "op_equal_truncated", "op_matrix", "poly_eval", "quasi_monomial",
    "relations_suite", "rodrigues_w",
]
