"""Exact construction and verification of isospectral partner Hamiltonians.

The package builds pairs of Schrodinger operators H = -lap + V and
Ht = -lap + Vt together with a differential operator A satisfying the
intertwining identity A H = Ht A as an exact symbolic statement over the
field Q(sqrt2), then cross-validates isospectrality numerically with
finite-difference eigensolves.

Layers
------
* scalars / polys / trig / parsing / operators: the exact expression kernel
  (field elements, polynomials, rational functions, azimuthal harmonics,
  the expression grammar, and differential operators in cartesian or
  cylindrical frames).
* susy1d: one-dimensional first- and second-order factorizations.
* iso3d_first: three-dimensional first-order constructions driven by a
  rotation-translation symmetry field (translational / axial / screw).
* iso3d_second: three-dimensional second-order constructions - the general
  metric-coefficient identity and the separable two-parameter family with
  quartic anisotropic potentials.
* spectra: finite-difference discretization, eigenvalue matching, and
  numeric intertwining residuals.
* pairfile / cli: JSON persistence and the `iso` command-line front end.
"""
from __future__ import annotations

from .errors import (
    ConfigError,
    ConstraintError,
    DomainError,
    IsopairError,
    ParseError,
    PoleError,
    SolverError,
)
from .operators import (
    CARTESIAN,
    CYLINDRICAL,
    LinOp,
    commutator,
    hamiltonian,
    intertwining_residual,
    is_zero_op,
    laplacian,
    op_adjoint,
    op_compose,
    rotate45_op,
)
from .pairs import PartnerPair, display_expr
from .parsing import parse_expr, parse_fraction, parse_scalar
from .polys import (
    CARTESIAN_VARS,
    CYLINDRICAL_VARS,
    Poly,
    RationalExpr,
    rotate45,
    rotation45_polys,
)
from .reports import CheckEntry, CheckReport
from .scalars import Scalar, scalar_text
from .trig import TrigPoly

__all__ = [
    "CARTESIAN",
    "CARTESIAN_VARS",
    "CYLINDRICAL",
    "CYLINDRICAL_VARS",
    "CheckEntry",
    "CheckReport",
    "ConfigError",
    "ConstraintError",
    "DomainError",
    "IsopairError",
    "LinOp",
    "ParseError",
    "PartnerPair",
    "Poly",
    "PoleError",
    "RationalExpr",
    "Scalar",
    "SolverError",
    "TrigPoly",
    "commutator",
    "derive",
    "display_expr",
    "eval_expr",
    "hamiltonian",
    "intertwining_residual",
    "is_zero_op",
    "laplacian",
    "op_adjoint",
    "op_compose",
    "parse_expr",
    "parse_fraction",
    "parse_scalar",
    "rotate45",
    "rotate45_op",
    "rotation45_polys",
    "scalar_text",
    "shift_vars",
]

__version__ = "0.1.0"


def derive(e, axis: int):
    """Exact partial derivative along axis 0, 1, or 2.

    Accepts any expression value (Poly, RationalExpr, TrigPoly); the
    cylindrical angle axis differentiates the harmonics.
    """
    return e.derive(axis)


def eval_expr(e, p) -> Scalar:
    """Exact value of an expression at a rational point.

    Raises PoleError when the denominator vanishes at p.
    """
    if isinstance(e, Scalar):
        return e
    return e.eval(p)


def shift_vars(e, offsets):
    """Substitute x_i -> x_i + offsets[i], expanded exactly."""
    return e.shift(offsets)
