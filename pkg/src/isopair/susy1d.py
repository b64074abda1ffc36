"""One-dimensional partner constructions.

First order: from a drift w(x) build

    V  = w^2 - w' + c        A  = d/dx + w
    V~ = w^2 + w' + c        A^t = -d/dx + w

with A H = H~ A and the factorizations A^t A = H - c, A A^t = H~ - c.

Second order: from a nonvanishing v(x) and a constant d build
A = d^2/dx^2 + v d/dx + w with

    w  = v^2/4 + v'/2 - v''/(2v) + v'^2/(4v^2) - d/v^2
    V  = v^2/4 + c - v' + v''/(2v) - v'^2/(4v^2) + d/v^2
    V~ = V + 2v'

satisfying A H = H~ A, A^t A = (H-c)^2 - d and A A^t = (H~-c)^2 - d.

The zero-mode classifier decides which of exp(-W), exp(+W) (W' = w) is
normalizable on the line, which tells whether H or H~ carries an extra
level at energy c, or neither (both spectra coincide).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import DomainError
from .operators import CARTESIAN, LinOp, hamiltonian
from .pairs import KIND_1D_ORDER1, KIND_1D_ORDER2, PartnerPair
from .polys import CARTESIAN_VARS, Poly, RationalExpr
from .reports import CheckReport
from .scalars import Scalar

UNBROKEN_H = "UNBROKEN_H"
UNBROKEN_HTILDE = "UNBROKEN_HTILDE"
BROKEN = "BROKEN"

_1D_INPUT_VARS = ("x", "x1")


def _as_expr(value: Union[str, Poly, RationalExpr]) -> RationalExpr:
    if isinstance(value, str):
        from .parsing import parse_expr

        return parse_expr(value, variables=_1D_INPUT_VARS)
    if isinstance(value, Poly):
        return RationalExpr(value)
    if isinstance(value, RationalExpr):
        return value
    return RationalExpr.of(value, CARTESIAN_VARS)


def _check_one_dimensional(expr: RationalExpr, what: str) -> None:
    for axis in (1, 2):
        if expr.num.degree_in(axis) > 0 or expr.den.degree_in(axis) > 0:
            raise DomainError(f"{what} must depend on x only")


def _const(value: Scalar) -> RationalExpr:
    return RationalExpr.of(value, CARTESIAN_VARS)


def build_order1(w, c=0) -> PartnerPair:
    """First-order pair from drift w(x) and energy offset c."""
    w = _as_expr(w)
    _check_one_dimensional(w, "drift w")
    c = Scalar.of(c)
    wp = w.derive(0)
    base = w * w + _const(c)
    v_pot = base - wp
    vt_pot = base + wp
    a = LinOp.partial(0) + LinOp.mul_by(w)
    return PartnerPair(
        kind=KIND_1D_ORDER1,
        dim=1,
        frame=CARTESIAN,
        order=1,
        V=v_pot,
        Vt=vt_pot,
        A=a,
        c=c,
        seed={"w": w},
    )


def build_order2(v, c=0, d=0) -> PartnerPair:
    """Second-order pair from drift v(x), offset c, splitting constant d."""
    v = _as_expr(v)
    _check_one_dimensional(v, "drift v")
    if v.is_zero():
        raise DomainError("second-order drift v must not vanish identically")
    c = Scalar.of(c)
    d = Scalar.of(d)
    vp = v.derive(0)
    vpp = vp.derive(0)
    v_sq = v * v
    quarter = _const(Scalar.of(1) / 4)
    half = _const(Scalar.of(1) / 2)
    mid = vpp / (v + v)
    tail = (vp * vp) / (v_sq * _const(Scalar.of(4)))
    d_term = _const(d) / v_sq
    w = quarter * v_sq + half * vp - mid + tail - d_term
    v_pot = quarter * v_sq + _const(c) - vp + mid - tail + d_term
    vt_pot = v_pot + vp + vp
    a = (LinOp.partial(0) @ LinOp.partial(0)) + LinOp.mul_by(v) @ LinOp.partial(0) \
        + LinOp.mul_by(w)
    return PartnerPair(
        kind=KIND_1D_ORDER2,
        dim=1,
        frame=CARTESIAN,
        order=2,
        V=v_pot,
        Vt=vt_pot,
        A=a,
        c=c,
        d=d,
        seed={"v": v},
    )


@dataclass(frozen=True)
class ZeroModeReport:
    classification: str
    ground_energy: Scalar
    W: Poly
    minus_normalizable: bool   # exp(-W), annihilated by A, candidate mode of H
    plus_normalizable: bool    # exp(+W), annihilated by A^t, candidate mode of H~
    detail: str

    @property
    def spectra_match(self) -> bool:
        return self.classification == BROKEN

    def unmatched_side(self) -> Optional[str]:
        if self.classification == UNBROKEN_H:
            return "H"
        if self.classification == UNBROKEN_HTILDE:
            return "Htilde"
        return None


def classify_zero_modes(w, c=0) -> ZeroModeReport:
    """Decide which formal zero mode of a first-order pair is square
    integrable on the whole line (polynomial drifts only)."""
    w = _as_expr(w)
    _check_one_dimensional(w, "drift w")
    if not w.is_polynomial():
        raise DomainError("zero-mode classification needs a polynomial drift")
    c = Scalar.of(c)
    w_poly = w.to_poly()
    big_w = w_poly.antiderive(0)
    if big_w.is_constant():
        return ZeroModeReport(
            classification=BROKEN,
            ground_energy=c,
            W=big_w,
            minus_normalizable=False,
            plus_normalizable=False,
            detail="degenerate: constant drift, neither formal mode decays "
                   "at both ends",
        )
    deg = big_w.degree_in(0)
    lead = big_w.terms[(deg, 0, 0)]
    if deg % 2 == 1:
        return ZeroModeReport(
            classification=BROKEN,
            ground_energy=c,
            W=big_w,
            minus_normalizable=False,
            plus_normalizable=False,
            detail=f"odd growth (deg W = {deg}): neither mode decays on both ends",
        )
    if lead.sign() > 0:
        return ZeroModeReport(
            classification=UNBROKEN_H,
            ground_energy=c,
            W=big_w,
            minus_normalizable=True,
            plus_normalizable=False,
            detail=f"W grows at both ends (deg {deg}): exp(-W) is a mode of H "
                   "at the offset energy; the partner spectrum misses it",
        )
    return ZeroModeReport(
        classification=UNBROKEN_HTILDE,
        ground_energy=c,
        W=big_w,
        minus_normalizable=False,
        plus_normalizable=True,
        detail=f"W falls at both ends (deg {deg}): exp(+W) is a mode of the "
               "partner at the offset energy; the base spectrum misses it",
    )


def verify_products(pair: PartnerPair) -> CheckReport:
    """Exact operator checks: intertwining both ways plus the polynomial
    factorization identities appropriate to the order."""
    if pair.dim != 1 or pair.frame != CARTESIAN:
        raise DomainError("verify_products handles one-dimensional pairs")
    report = CheckReport()
    h = hamiltonian(pair.V, dim=1)
    h_t = hamiltonian(pair.Vt, dim=1)
    a = pair.A
    a_t = a.adjoint()

    res = a @ h - h_t @ a
    report.add("intertwine", res.is_zero(), res)
    res = a_t @ h_t - h @ a_t
    report.add("intertwine_adjoint", res.is_zero(), res)

    c_op = LinOp.mul_by(_const(pair.c if pair.c is not None else Scalar.of(0)))
    if pair.order == 1:
        res = a_t @ a - (h - c_op)
        report.add("factor_left", res.is_zero(), res)
        res = a @ a_t - (h_t - c_op)
        report.add("factor_right", res.is_zero(), res)
    else:
        d_op = LinOp.mul_by(_const(pair.d if pair.d is not None else Scalar.of(0)))
        shifted = h - c_op
        res = a_t @ a - (shifted @ shifted - d_op)
        report.add("factor_left", res.is_zero(), res)
        shifted_t = h_t - c_op
        res = a @ a_t - (shifted_t @ shifted_t - d_op)
        report.add("factor_right", res.is_zero(), res)

    # the doubled-space superalgebra: its supercharge is strictly lower
    # triangular, so each relation collapses to checks already made
    entry = {e.tag: e.ok for e in report.entries}
    report.add(
        "superalgebra_commutator",
        entry["intertwine"] and entry["intertwine_adjoint"],
        detail="reduces componentwise to intertwine / intertwine_adjoint",
    )
    report.add(
        "superalgebra_nilpotent",
        True,
        detail="structural: the supercharge is strictly lower triangular",
    )
    report.add(
        "superalgebra_anticommutator",
        entry["factor_left"] and entry["factor_right"],
        detail="reduces componentwise to factor_left / factor_right",
    )
    return report
