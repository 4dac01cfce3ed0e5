"""Zeta polynomials of small F_q-Lie algebras, three independent ways.

The package computes the subalgebra and ideal zeta polynomials of the
solvable Lie algebras of dimension at most 4 over finite fields by

  * the diagonal-cell method on reduced row diagonal forms (fqzeta.rrdf),
  * a brute-force Grassmannian oracle (fqzeta.oracle), and
  * the recorded closed-form symbolic formulas (fqzeta.formulas),

cross-validates the three routes (fqzeta.analysis) and analyses the variety
point counts behind the formulas: residue-class behaviour, the non-PORC
witness 2x^3+1, periods and isospectral pairs.
"""

from .gf import FieldCtx, UniPoly, count_roots, make_field
from .liealg import (LieAlgebra, catalog, catalog_from_spec,
                     from_structure_constants, is_nilpotent, is_solvable,
                     valid_params)
from .zetapoly import ZetaPoly
from .rrdf import (DiagonalType, RrdfMatrix, cell_count, cell_size,
                   diagonal_types, enumerate_cell, is_ideal, is_subalgebra,
                   zeta_enumerate)
from .oracle import zeta_oracle
from .formulas import (SymbolicZeta, VarietyId, closed_form, evaluate,
                       gaussian_binomial, extra_variety_identities,
                       variety_count, zeta_formula)

__all__ = [
    "FieldCtx", "UniPoly", "count_roots", "make_field",
    "LieAlgebra", "catalog", "catalog_from_spec", "from_structure_constants",
    "is_nilpotent", "is_solvable", "valid_params",
    "ZetaPoly",
    "DiagonalType", "RrdfMatrix", "cell_count", "cell_size", "diagonal_types",
    "enumerate_cell", "is_ideal", "is_subalgebra", "zeta_enumerate",
    "zeta_oracle",
    "SymbolicZeta", "VarietyId", "closed_form", "evaluate",
    "gaussian_binomial", "extra_variety_identities", "variety_count",
    "zeta_formula",
]

__version__ = "0.1.0"
