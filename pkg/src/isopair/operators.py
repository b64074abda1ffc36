"""Linear differential operators with exact symbolic coefficients.

A LinOp is a finite sum  c_alpha(x) * d^alpha  over multi-indices alpha.
Coefficients are RationalExpr in the cartesian frame and TrigPoly in the
cylindrical frame (a plain rational coefficient is promoted to the k = 0
harmonic). Composition expands through the generalized Leibniz rule

    c d^alpha ( d * ) = c * sum_{gamma <= alpha} C(alpha, gamma)
                          (d^gamma coeff) d^{alpha - gamma + beta},

which is valid for any commuting partial derivatives, so the same code path
verifies cartesian and cylindrical identities. Operator equality is decided
by subtracting and testing every coefficient for exact zero.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping, Tuple, Union

from .polys import CARTESIAN_VARS, CYLINDRICAL_VARS, Poly, RationalExpr
from .scalars import ONE, Scalar, binomial
from .trig import TrigPoly

MultiIndex = Tuple[int, int, int]

CARTESIAN = "cartesian"
CYLINDRICAL = "cylindrical"

_ZERO_IDX: MultiIndex = (0, 0, 0)


def _coerce_coeff(value, frame):
    if frame == CYLINDRICAL:
        return TrigPoly.of(value)
    if isinstance(value, RationalExpr):
        return value
    if isinstance(value, Poly):
        return RationalExpr(value)
    return RationalExpr.of(value, CARTESIAN_VARS)


class LinOp:
    """Differential operator sum_alpha c_alpha d^alpha."""

    __slots__ = ("frame", "terms")

    def __init__(self, terms: Mapping[MultiIndex, object] | None = None,
                 frame: str = CARTESIAN):
        clean = {}
        if terms:
            for idx, coeff in terms.items():
                coeff = _coerce_coeff(coeff, frame)
                if not coeff.is_zero():
                    clean[tuple(idx)] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "frame", frame)

    def __setattr__(self, name, value):
        raise AttributeError("LinOp is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(frame=CARTESIAN) -> "LinOp":
        return LinOp({}, frame)

    @staticmethod
    def identity(frame=CARTESIAN) -> "LinOp":
        return LinOp({_ZERO_IDX: 1}, frame)

    @staticmethod
    def partial(axis: int, frame=CARTESIAN) -> "LinOp":
        idx = [0, 0, 0]
        idx[axis] = 1
        return LinOp({tuple(idx): 1}, frame)

    @staticmethod
    def mul_by(expr, frame=CARTESIAN) -> "LinOp":
        """Multiplication operator f -> expr * f."""
        return LinOp({_ZERO_IDX: expr}, frame)

    # -- structure ----------------------------------------------------------

    def order(self) -> int:
        return max((sum(idx) for idx in self.terms), default=0)

    def coeff(self, idx: MultiIndex):
        zero = _coerce_coeff(0, self.frame)
        return self.terms.get(tuple(idx), zero)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "LinOp"):
        if self.frame != other.frame:
            raise ValueError("operator frame mismatch")

    # -- linear arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for idx, coeff in other.terms.items():
            cur = acc.get(idx)
            total = coeff if cur is None else cur + coeff
            if total.is_zero():
                acc.pop(idx, None)
            else:
                acc[idx] = total
        return LinOp(acc, self.frame)

    def __sub__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return LinOp({idx: -c for idx, c in self.terms.items()}, self.frame)

    def scale(self, value) -> "LinOp":
        factor = _coerce_coeff(value, self.frame)
        return LinOp({idx: c * factor for idx, c in self.terms.items()}, self.frame)

    def __mul__(self, other):
        # scalar or coefficient scaling only; use compose for operator products
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    # -- composition -----------------------------------------------------------

    def compose(self, other: "LinOp") -> "LinOp":
        """Operator product self(other(.)), expanded to normal form."""
        self._check(other)
        acc: dict = {}

        def add_term(idx, coeff):
            cur = acc.get(idx)
            total = coeff if cur is None else cur + coeff
            if total.is_zero():
                acc.pop(idx, None)
            else:
                acc[idx] = total

        for alpha, c in self.terms.items():
            for beta, d in other.terms.items():
                for gamma in product(range(alpha[0] + 1), range(alpha[1] + 1),
                                     range(alpha[2] + 1)):
                    weight = (binomial(alpha[0], gamma[0])
                              * binomial(alpha[1], gamma[1])
                              * binomial(alpha[2], gamma[2]))
                    deriv = d
                    for axis in range(3):
                        for _ in range(gamma[axis]):
                            deriv = deriv.derive(axis)
                        if deriv.is_zero():
                            break
                    if deriv.is_zero():
                        continue
                    idx = (alpha[0] - gamma[0] + beta[0],
                           alpha[1] - gamma[1] + beta[1],
                           alpha[2] - gamma[2] + beta[2])
                    term = c * deriv if weight == 1 else c * deriv * Scalar(weight)
                    add_term(idx, term)
        return LinOp(acc, self.frame)

    def __matmul__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return self.compose(other)

    def adjoint(self) -> "LinOp":
        """Formal L2 adjoint: (c d^alpha)^t = (-1)^|alpha| d^alpha (c .)."""
        if self.frame != CARTESIAN:
            raise ValueError("adjoint is defined in the cartesian frame only")
        total = LinOp.zero(self.frame)
        for alpha, c in self.terms.items():
            dalpha = LinOp({alpha: 1}, self.frame)
            piece = dalpha.compose(LinOp.mul_by(c, self.frame))
            if sum(alpha) % 2:
                piece = -piece
            total = total + piece
        return total

    def apply(self, expr):
        """Apply the operator to an expression of the matching frame."""
        target = _coerce_coeff(expr, self.frame)
        total = None
        for alpha, c in self.terms.items():
            deriv = target
            for axis in range(3):
                for _ in range(alpha[axis]):
                    deriv = deriv.derive(axis)
            piece = c * deriv
            total = piece if total is None else total + piece
        if total is None:
            total = _coerce_coeff(0, self.frame)
        return total

    # -- comparisons / printing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = CARTESIAN_VARS if self.frame == CARTESIAN else CYLINDRICAL_VARS
        pieces = []
        for idx, coeff in self.sorted_terms():
            dpart = "*".join(
                f"d_{name}" if e == 1 else f"d_{name}^{e}"
                for name, e in zip(names, idx) if e)
            ctext = str(coeff)
            if dpart:
                pieces.append(f"({ctext})*{dpart}" if ctext != "1" else dpart)
            else:
                pieces.append(f"({ctext})" if " " in ctext else ctext)
        return " + ".join(pieces)

    def __repr__(self):
        return f"LinOp({self})"


# -- module-level helpers matching the public surface --------------------------


def op_compose(a: LinOp, b: LinOp) -> LinOp:
    return a.compose(b)


def op_adjoint(a: LinOp) -> LinOp:
    return a.adjoint()


def is_zero_op(a: LinOp) -> bool:
    return a.is_zero()


def laplacian(dim: int = 3, frame: str = CARTESIAN) -> LinOp:
    """The flat Laplacian; in the cylindrical frame
    d_rho^2 + (1/rho) d_rho + (1/rho^2) d_phi^2 + d_z^2."""
    if frame == CARTESIAN:
        if dim == 1:
            return LinOp({(2, 0, 0): 1})
        if dim == 3:
            return LinOp({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        raise ValueError("dim must be 1 or 3")
    rho = Poly.variable(0, CYLINDRICAL_VARS)
    inv_rho = RationalExpr(Poly.one(CYLINDRICAL_VARS), rho)
    inv_rho2 = RationalExpr(Poly.one(CYLINDRICAL_VARS), rho * rho)
    return LinOp({(2, 0, 0): 1, (1, 0, 0): inv_rho,
                  (0, 2, 0): inv_rho2, (0, 0, 2): 1}, CYLINDRICAL)


def hamiltonian(potential, dim: int = 3, frame: str = CARTESIAN) -> LinOp:
    """Schrodinger operator -Laplacian + potential."""
    return (-laplacian(dim, frame)) + LinOp.mul_by(potential, frame)


def intertwining_residual(a: LinOp, v, v_tilde, dim: int = 3) -> LinOp:
    """A H - H~ A with H = -Lap + V and H~ = -Lap + V~; zero iff A intertwines."""
    h = hamiltonian(v, dim, a.frame)
    h_tilde = hamiltonian(v_tilde, dim, a.frame)
    return a.compose(h) - h_tilde.compose(a)


def commutator(a: LinOp, b: LinOp) -> LinOp:
    return a.compose(b) - b.compose(a)


def rotate45_op(op: LinOp) -> LinOp:
    """Rewrite a cartesian operator in axes turned 45 degrees about x3.

    Coefficients transform by substitution; each d1^i d2^j factor expands
    through d1 = (du + dv)/sqrt2, d2 = (du - dv)/sqrt2.
    """
    from .polys import rotate45

    if op.frame != CARTESIAN:
        raise ValueError("rotation helper applies to cartesian operators")
    inv_root = Scalar(0, Fraction(1, 2))  # 1/sqrt2
    d1 = (LinOp.partial(0) + LinOp.partial(1)).scale(inv_root)
    d2 = (LinOp.partial(0) - LinOp.partial(1)).scale(inv_root)
    d3 = LinOp.partial(2)
    basis = (d1, d2, d3)
    total = LinOp.zero()
    for alpha, coeff in op.terms.items():
        piece = LinOp.mul_by(rotate45(coeff))
        for axis in range(3):
            for _ in range(alpha[axis]):
                piece = piece.compose(basis[axis])
        total = total + piece
    return total
