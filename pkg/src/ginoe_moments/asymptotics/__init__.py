"""Exact large-N expansions: coefficients, MGF levels, moment series, Stieltjes levels."""
from .coefficients import (
    LargeParameterExpansion,
    a_coefficients,
    a_coefficients_via_2f1,
    b_coefficients,
    b_coefficients_via_2f1,
    gauss_2f1_large_c_expansion,
)
from .expansion import AsymptoticSeries, moment_asymptotic
from .sinhcosh import (
    D0,
    D1,
    D2,
    DiffOperator,
    DistributionalLevel,
    MGFLevels,
    Prefactor,
    SinhCoshPoly,
    d0_factorizations,
    density_correction_polynomials,
    mgf_expansion_levels,
)
from .stieltjes import (
    RationalFunction,
    StieltjesLevel,
    StieltjesLevels,
    stieltjes_expansion_levels,
)

__all__ = [
    "AsymptoticSeries",
    "D0",
    "D1",
    "D2",
    "DiffOperator",
    "DistributionalLevel",
    "LargeParameterExpansion",
    "MGFLevels",
    "Prefactor",
    "RationalFunction",
    "SinhCoshPoly",
    "StieltjesLevel",
    "StieltjesLevels",
    "a_coefficients",
    "a_coefficients_via_2f1",
    "b_coefficients",
    "b_coefficients_via_2f1",
    "d0_factorizations",
    "density_correction_polynomials",
    "gauss_2f1_large_c_expansion",
    "mgf_expansion_levels",
    "moment_asymptotic",
    "stieltjes_expansion_levels",
]
