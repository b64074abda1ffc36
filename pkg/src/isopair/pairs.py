"""Partner-pair container shared by every construction.

A PartnerPair bundles the two potentials, the intertwining operator,
and enough of the seed data to reproduce and re-verify the pair. The
screw case stores V twice (the operator commutes with a single H), so
downstream code can treat every construction uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from .operators import CARTESIAN, LinOp
from .polys import RationalExpr
from .scalars import Scalar
from .trig import TrigPoly

KIND_1D_ORDER1 = "1d-order1"
KIND_1D_ORDER2 = "1d-order2"
KIND_3D_TRANSLATIONAL = "3d-translational"
KIND_3D_AXIAL = "3d-axial"
KIND_3D_SCREW = "3d-screw"
KIND_3D_FAMILY = "3d-family"

ALL_KINDS = (
    KIND_1D_ORDER1,
    KIND_1D_ORDER2,
    KIND_3D_TRANSLATIONAL,
    KIND_3D_AXIAL,
    KIND_3D_SCREW,
    KIND_3D_FAMILY,
)

# display spellings per frame/dimension
_1D_VARS = ("x", "x2", "x3")


def display_expr(expr, dim: int, frame: str) -> str:
    """Canonical text for an expression, using 'x' in one dimension."""
    if expr is None:
        return ""
    if isinstance(expr, Scalar):
        from .scalars import scalar_text

        return scalar_text(expr)
    if dim == 1 and frame == CARTESIAN and isinstance(expr, RationalExpr):
        return str(expr.rename_vars(_1D_VARS))
    return str(expr)


@dataclass
class PartnerPair:
    kind: str
    dim: int
    frame: str
    order: int
    V: Any                       # RationalExpr | TrigPoly
    Vt: Any                      # RationalExpr | TrigPoly
    A: LinOp
    c: Optional[Scalar] = None
    d: Optional[Scalar] = None
    seed: Dict[str, Any] = field(default_factory=dict)
    case_tag: str = ""
    extras: Dict[str, Any] = field(default_factory=dict)

    def seed_texts(self) -> Dict[str, str]:
        out = {}
        for name, value in self.seed.items():
            out[name] = display_expr(value, self.dim, self.frame)
        return out

    def a_terms(self) -> Tuple[Tuple[Tuple[int, int, int], Any], ...]:
        return tuple(self.A.sorted_terms())

    def describe(self) -> str:
        lines = [
            f"kind: {self.kind}",
            f"case: {self.case_tag}" if self.case_tag else None,
            f"V  = {display_expr(self.V, self.dim, self.frame)}",
            f"Vt = {display_expr(self.Vt, self.dim, self.frame)}",
            f"A  = {self.A}",
        ]
        if self.c is not None:
            from .scalars import scalar_text

            lines.append(f"c  = {scalar_text(self.c)}")
        if self.d is not None:
            from .scalars import scalar_text

            lines.append(f"d  = {scalar_text(self.d)}")
        return "\n".join(line for line in lines if line)
