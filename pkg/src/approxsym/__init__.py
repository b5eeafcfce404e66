"""Exact first-order approximate Lie symmetry engine for the perturbed
Gardner equation and structurally similar (1+1) evolution equations."""

from .algebra import EpsSeries, Poly, RationalExpr, Symbol
from .jets import (JetOrderError, ProlongedField, SolutionManifold,
                   VectorField, apply_prolonged, jet, prolong,
                   restrict_to_manifold, total_derivative)
from .solver import (Ansatz, DeterminingSystem, SymmetryBasis,
                     assemble_deformation, assemble_exact, auxiliary_H,
                     solve_gardner_symmetries, solve_kdv_symmetries,
                     verify_approximate_symmetry)
from .structure import (AdjointMap, LieAlgebra, adjoint_map, bracket,
                        commutator_table, derived_series, gardner_algebra,
                        verify_optimal_system)

__version__ = "0.1.0"

__all__ = [
    "Ansatz", "AdjointMap", "DeterminingSystem", "EpsSeries", "JetOrderError",
    "LieAlgebra", "Poly", "ProlongedField", "RationalExpr",
    "SolutionManifold", "Symbol", "SymmetryBasis", "VectorField",
    "adjoint_map", "apply_prolonged", "assemble_deformation",
    "assemble_exact", "auxiliary_H", "bracket", "commutator_table",
    "derived_series", "gardner_algebra", "jet", "prolong",
    "restrict_to_manifold", "solve_gardner_symmetries",
    "solve_kdv_symmetries", "total_derivative",
    "verify_approximate_symmetry", "verify_optimal_system",
]
