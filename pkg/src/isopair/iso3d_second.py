"""Three-dimensional second-order constructions.

The second-order derivative part of an intertwiner A = g_ij d_i d_j + ...
must satisfy the cyclic condition d_i g_jk + d_j g_ki + d_k g_ij = 0; its
general polynomial solution is a 20-parameter tensor quadratic in x,
equivalently a quadratic in angular momentum and translation generators.

The worked family fixes g = diag(1, -1, 0): A = d1^2 - d2^2 + v.grad + w.
With the diagonal coordinates x+- = (x1 +- x2)/sqrt2, the shifted-scaled
ones y_{1,2} = c x_{1,2} + d_{1,2} and y+- = (y1 +- y2)/sqrt2, the drift
and potentials close in terms of

    beta+- = h+- y+- + q+- / y+-         (functions of x+- alone)
    alpha_{1,2}, gamma_{1,2}             (functions of x_{1,2} alone)
    V3(x3)                               (quartic polynomial)

subject to five exact constraint products s+-h2 = s+-q2 = s-q1 = 0.
Everything here is verified against the defining coefficient balances

    2nd order:  d_i v_j + d_j v_i = (Vt - V) c_ij        (c = diag(1,-1,0))
    1st order:  c_ii d_i (Vt + V) + 2 d_i w = (Vt - V) v_i
    0th order:  v . grad (Vt + V) = 2 (Vt - V) w

and the operator identity A H = Ht A itself, never trusted from the
closed forms alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import ConstraintError, DomainError
from .operators import LinOp, hamiltonian
from .pairs import KIND_3D_FAMILY, PartnerPair
from .polys import CARTESIAN_VARS, Poly, RationalExpr
from .reports import CheckReport
from .scalars import HALF, INV_SQRT2, SQRT2, Scalar, scalar_text


def _sc(value) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar.of(value)


def _x(axis: int) -> RationalExpr:
    return RationalExpr.variable(axis, CARTESIAN_VARS)


# ---------------------------------------------------------------------------
# the 20-parameter quadratic tensor
# ---------------------------------------------------------------------------

_A_KEYS = ("a11", "a22", "a33", "a12", "a23", "a31")
_B_KEYS = ("b11", "b12", "b13", "b21", "b22", "b23", "b31", "b32")
_C_KEYS = ("c11", "c22", "c33", "c12", "c23", "c31")


@dataclass(frozen=True)
class MetricParams:
    a11: Scalar = Scalar.of(0)
    a22: Scalar = Scalar.of(0)
    a33: Scalar = Scalar.of(0)
    a12: Scalar = Scalar.of(0)
    a23: Scalar = Scalar.of(0)
    a31: Scalar = Scalar.of(0)
    b11: Scalar = Scalar.of(0)
    b12: Scalar = Scalar.of(0)
    b13: Scalar = Scalar.of(0)
    b21: Scalar = Scalar.of(0)
    b22: Scalar = Scalar.of(0)
    b23: Scalar = Scalar.of(0)
    b31: Scalar = Scalar.of(0)
    b32: Scalar = Scalar.of(0)
    c11: Scalar = Scalar.of(0)
    c22: Scalar = Scalar.of(0)
    c33: Scalar = Scalar.of(0)
    c12: Scalar = Scalar.of(0)
    c23: Scalar = Scalar.of(0)
    c31: Scalar = Scalar.of(0)

    def __post_init__(self):
        for name in _A_KEYS + _B_KEYS + _C_KEYS:
            object.__setattr__(self, name, _sc(getattr(self, name)))

    @property
    def b33(self) -> Scalar:
        # the rotation-sector trace is gauge: fixed so the b's sum to zero
        return -(self.b11 + self.b22)

    def a_matrix(self) -> Tuple[Tuple[Scalar, ...], ...]:
        return (
            (self.a11, self.a12, self.a31),
            (self.a12, self.a22, self.a23),
            (self.a31, self.a23, self.a33),
        )

    def c_matrix(self) -> Tuple[Tuple[Scalar, ...], ...]:
        return (
            (self.c11, self.c12, self.c31),
            (self.c12, self.c22, self.c23),
            (self.c31, self.c23, self.c33),
        )

    def b_traceless(self) -> Tuple[Tuple[Scalar, ...], ...]:
        """The rotation-times-translation coefficients in the traceless
        gauge matching the printed tensor components."""
        third = Scalar(Fraction(1, 3))
        two = Scalar.of(2)
        return (
            ((two * self.b11 - self.b22) * third, self.b12, self.b13),
            (self.b21, (two * self.b22 - self.b11) * third, self.b23),
            (self.b31, self.b32, -(self.b11 + self.b22) * third),
        )


@dataclass(frozen=True)
class MetricTensor:
    g11: Poly
    g22: Poly
    g33: Poly
    g12: Poly
    g23: Poly
    g31: Poly

    def component(self, i: int, j: int) -> Poly:
        key = (min(i, j), max(i, j))
        return {
            (0, 0): self.g11, (1, 1): self.g22, (2, 2): self.g33,
            (0, 1): self.g12, (1, 2): self.g23, (0, 2): self.g31,
        }[key]


def build_metric(p: MetricParams) -> MetricTensor:
    """The general quadratic solution of the cyclic condition."""
    x1, x2, x3 = _x(0), _x(1), _x(2)
    half = HALF
    g11 = (x2 * x2 * p.a33 + x3 * x3 * p.a22 - x2 * x3 * (p.a23 + p.a23)
           - x2 * p.b31 + x3 * p.b21 + p.c11)
    g22 = (x3 * x3 * p.a11 + x1 * x1 * p.a33 - x3 * x1 * (p.a31 + p.a31)
           - x3 * p.b12 + x1 * p.b32 + p.c22)
    g33 = (x1 * x1 * p.a22 + x2 * x2 * p.a11 - x1 * x2 * (p.a12 + p.a12)
           - x1 * p.b23 + x2 * p.b13 + p.c33)
    g12 = (-(x1 * x2 * p.a33) + x3 * x1 * p.a23 + x2 * x3 * p.a31
           - x3 * x3 * p.a12 + x1 * (p.b31 * half) - x2 * (p.b32 * half)
           - x3 * ((p.b11 - p.b22) * half) + p.c12)
    g23 = (-(x2 * x3 * p.a11) + x1 * x2 * p.a31 + x3 * x1 * p.a12
           - x1 * x1 * p.a23 + x2 * (p.b12 * half) - x3 * (p.b13 * half)
           - x1 * (p.b22 * half) + p.c23)
    g31 = (-(x3 * x1 * p.a22) + x2 * x3 * p.a12 + x1 * x2 * p.a23
           - x2 * x2 * p.a31 + x3 * (p.b23 * half) - x1 * (p.b21 * half)
           + x2 * (p.b11 * half) + p.c31)
    return MetricTensor(
        g11=g11.to_poly(), g22=g22.to_poly(), g33=g33.to_poly(),
        g12=g12.to_poly(), g23=g23.to_poly(), g31=g31.to_poly(),
    )


def _angular_momentum_ops() -> Tuple[LinOp, LinOp, LinOp]:
    ops = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        ops.append(
            LinOp.mul_by(_x(j)) @ LinOp.partial(k)
            - LinOp.mul_by(_x(k)) @ LinOp.partial(j)
        )
    return tuple(ops)  # type: ignore[return-value]


def verify_metric(p: MetricParams, g: MetricTensor) -> CheckReport:
    """The cyclic condition on every index triple, plus the exact
    rewriting of g_ij d_i d_j through angular momentum generators."""
    report = CheckReport()
    ok = True
    worst = None
    for i in range(3):
        for j in range(3):
            for k in range(3):
                res = (g.component(j, k).derive(i)
                       + g.component(k, i).derive(j)
                       + g.component(i, j).derive(k))
                if not res.is_zero():
                    ok = False
                    worst = res
    report.add("cyclic_condition", ok, worst)

    lhs = LinOp.zero()
    for i in range(3):
        for j in range(3):
            lhs = lhs + (
                LinOp.mul_by(RationalExpr(g.component(i, j)))
                @ LinOp.partial(i) @ LinOp.partial(j)
            )

    l_ops = _angular_momentum_ops()
    a_mat = p.a_matrix()
    c_mat = p.c_matrix()
    b_mat = p.b_traceless()
    trace = p.a11 + p.a22 + p.a33
    rhs = LinOp.zero()
    for i in range(3):
        for j in range(3):
            rhs = rhs + (l_ops[i] @ l_ops[j]) * a_mat[i][j]
            rhs = rhs + (l_ops[i] @ LinOp.partial(j)) * b_mat[i][j]
            rhs = rhs + (LinOp.partial(i) @ LinOp.partial(j)) * c_mat[i][j]
            d_ij = (trace if i == j else Scalar.of(0)) - a_mat[i][j]
            rhs = rhs + (LinOp.mul_by(_x(i)) @ LinOp.partial(j)) * d_ij
    res = lhs - rhs
    report.add("angular_operator_identity", res.is_zero(), res)
    return report


# ---------------------------------------------------------------------------
# the diag(1, -1, 0) family
# ---------------------------------------------------------------------------

_PARAM_KEYS = ("c", "d1", "d2", "h1", "h2", "q1", "q2", "s1", "s2",
               "m2", "alpha0", "gamma0")


@dataclass(frozen=True)
class FamilyParams:
    c: Scalar
    d1: Scalar = Scalar.of(0)
    d2: Scalar = Scalar.of(0)
    h1: Scalar = Scalar.of(0)
    h2: Scalar = Scalar.of(0)
    q1: Scalar = Scalar.of(0)
    q2: Scalar = Scalar.of(0)
    s1: Scalar = Scalar.of(0)
    s2: Scalar = Scalar.of(0)
    m2: Scalar = Scalar.of(0)
    alpha0: Scalar = Scalar.of(0)
    gamma0: Scalar = Scalar.of(0)

    def __post_init__(self):
        for name in _PARAM_KEYS:
            object.__setattr__(self, name, _sc(getattr(self, name)))

    # diagonal-frame combinations
    @property
    def d_plus(self) -> Scalar:
        return (self.d1 + self.d2) * INV_SQRT2

    @property
    def d_minus(self) -> Scalar:
        return (self.d1 - self.d2) * INV_SQRT2

    @property
    def h_plus(self) -> Scalar:
        return (self.h1 + self.h2) * INV_SQRT2

    @property
    def h_minus(self) -> Scalar:
        return (self.h1 - self.h2) * INV_SQRT2

    @property
    def q_plus(self) -> Scalar:
        return (self.q1 + self.q2) * INV_SQRT2

    @property
    def q_minus(self) -> Scalar:
        return (self.q1 - self.q2) * INV_SQRT2

    @property
    def s_plus(self) -> Scalar:
        return (self.s1 + self.s2) * INV_SQRT2

    @property
    def s_minus(self) -> Scalar:
        return (self.s1 - self.s2) * INV_SQRT2

    # coefficients of the x3 polynomial and the drift constant
    @property
    def m4(self) -> Scalar:
        return Scalar.of(4) * self.c * self.c

    @property
    def m3(self) -> Scalar:
        return SQRT2 * (Scalar.of(6) * self.c * self.c * self.h1)

    @property
    def m1(self) -> Scalar:
        gap = self.m2 - Scalar.of(4) * self.c * self.c * self.h1 * self.h1
        return self.h1 * gap * INV_SQRT2 - self.alpha0

    @property
    def a(self) -> Scalar:
        # forced by the constant part of the separated x3 equation
        return -(self.d_plus * self.d_minus) / self.c

    def constraint_violations(self) -> List[Tuple[str, Scalar]]:
        products = [
            ("s_plus*h2", self.s_plus * self.h2),
            ("s_minus*h2", self.s_minus * self.h2),
            ("s_plus*q2", self.s_plus * self.q2),
            ("s_minus*q2", self.s_minus * self.q2),
            ("s_minus*q1", self.s_minus * self.q1),
        ]
        return [(name, value) for name, value in products
                if not value.is_zero()]

    def to_dict(self) -> Dict[str, str]:
        return {key: scalar_text(getattr(self, key)) for key in _PARAM_KEYS}

    @staticmethod
    def from_dict(data: Dict) -> "FamilyParams":
        from .parsing import parse_scalar

        unknown = set(data) - set(_PARAM_KEYS)
        if unknown:
            raise DomainError(f"unknown family parameters: {sorted(unknown)}")
        kwargs = {}
        for key, raw in data.items():
            kwargs[key] = parse_scalar(raw) if isinstance(raw, str) \
                else Scalar.of(raw)
        if "c" not in kwargs:
            raise DomainError("family parameters need c")
        return FamilyParams(**kwargs)


_COMPONENT_KEYS = (
    "v1", "v2", "v3",
    "beta_plus", "beta_minus", "beta_plus_prime", "beta_minus_prime",
    "alpha1", "alpha2", "gamma1", "gamma2", "V3", "w",
)


@dataclass(frozen=True)
class Family3D:
    params: FamilyParams
    v1: RationalExpr
    v2: RationalExpr
    v3: RationalExpr
    beta_plus: RationalExpr
    beta_minus: RationalExpr
    beta_plus_prime: RationalExpr
    beta_minus_prime: RationalExpr
    alpha1: RationalExpr
    alpha2: RationalExpr
    gamma1: RationalExpr
    gamma2: RationalExpr
    V3: Poly
    w: RationalExpr
    V: RationalExpr
    Vt: RationalExpr
    A: LinOp
    singular_lines: Tuple[str, ...]

    def to_pair(self) -> PartnerPair:
        ys = dict(zip(("y1", "y2", "y_plus", "y_minus"),
                      _family_ys(self.params)))
        forms = {tag.split("=")[0]: str(ys[tag.split("=")[0]])
                 for tag in self.singular_lines}
        components = {name: str(getattr(self, name))
                      for name in _COMPONENT_KEYS}
        return PartnerPair(
            kind=KIND_3D_FAMILY,
            dim=3,
            frame="cartesian",
            order=2,
            V=self.V,
            Vt=self.Vt,
            A=self.A,
            seed={"w": self.w},
            case_tag="FAMILY",
            extras={
                "family_params": self.params.to_dict(),
                "singular_lines": list(self.singular_lines),
                # linear forms whose zero planes the box must avoid
                "singular_forms": forms,
                # full component expressions, so a stored pair can be
                # re-verified equation by equation without rebuilding
                "family_components": components,
            },
        )


def _family_ys(p: FamilyParams):
    y1 = _x(0) * p.c + p.d1
    y2 = _x(1) * p.c + p.d2
    y_plus = (y1 + y2) * INV_SQRT2
    y_minus = (y1 - y2) * INV_SQRT2
    return y1, y2, y_plus, y_minus


def build_family(p: FamilyParams) -> Family3D:
    """Assemble drift, potentials, and intertwiner from the closed forms."""
    if p.c.is_zero():
        raise DomainError(
            "the family needs c != 0; at c = 0 the third drift component "
            "degenerates and the construction reduces to the planar case")
    violations = p.constraint_violations()
    if violations:
        listing = ", ".join(
            f"{name} = {scalar_text(value)}" for name, value in violations)
        raise ConstraintError(
            violations[0][0],
            f"constraint products must vanish exactly: {listing}")

    x1, x2, x3 = _x(0), _x(1), _x(2)
    y1, y2, y_plus, y_minus = _family_ys(p)

    beta_plus = y_plus * p.h_plus + RationalExpr.of(p.q_plus, CARTESIAN_VARS) / y_plus
    beta_minus = y_minus * p.h_minus + RationalExpr.of(p.q_minus, CARTESIAN_VARS) / y_minus
    # beta+- depend on x+- alone, so d/dx+- acts as sqrt2 * d/dx1
    beta_plus_prime = beta_plus.derive(0) * SQRT2
    beta_minus_prime = beta_minus.derive(0) * SQRT2

    sqrt2_h1 = SQRT2 * p.h1
    alpha1 = -(y1 * y1 * sqrt2_h1 + p.alpha0)
    alpha2 = y2 * y2 * sqrt2_h1 + p.alpha0

    gap = p.m2 - Scalar.of(4) * p.c * p.c * p.h1 * p.h1
    inv_m4 = (Scalar.of(4) * p.c * p.c).inverse()
    gamma1 = -(y1 ** 4 + y1 * y1 * gap + p.gamma0
               + RationalExpr.of(p.s1, CARTESIAN_VARS) / (y1 * y1)) * inv_m4
    gamma2 = (y2 ** 4 + y2 * y2 * gap + p.gamma0
              + RationalExpr.of(p.s2, CARTESIAN_VARS) / (y2 * y2)) * inv_m4

    v3_poly = Poly(
        {
            (0, 0, 4): p.m4 / 4,
            (0, 0, 3): p.m3 / 3,
            (0, 0, 2): p.m2 / 2,
            (0, 0, 1): p.m1,
        },
        CARTESIAN_VARS,
    )
    big_v3 = RationalExpr(v3_poly)

    v1 = x3 * y1 + (beta_plus + beta_minus) * INV_SQRT2
    v2 = -(x3 * y2) - (beta_plus - beta_minus) * INV_SQRT2
    v3 = (p.a - (x1 * x1 * (p.c * HALF) + x1 * p.d1)
          + (x2 * x2 * (p.c * HALF) + x2 * p.d2))
    if v3.is_zero():
        raise DomainError("degenerate family: the third drift component vanishes")

    v_diff = x3 * (p.c + p.c) + beta_plus_prime + beta_minus_prime
    v_sum = (big_v3 + big_v3
             + x3 * x3 * (y_plus * y_plus + y_minus * y_minus) * Fraction(3, 2)
             + x3 * (y_plus * beta_plus + y_minus * beta_minus + alpha2 - alpha1)
             + (beta_plus * beta_plus + beta_minus * beta_minus) * HALF
             + gamma2 - gamma1)
    v_pot = (v_sum - v_diff) * HALF
    vt_pot = (v_sum + v_diff) * HALF
    w = (v3 * (x3 * x3) * p.c
         + v3 * (beta_plus_prime + beta_minus_prime) * x3
         + beta_plus * beta_minus + gamma1 + gamma2) * HALF

    a_op = (
        LinOp.partial(0) @ LinOp.partial(0)
        - LinOp.partial(1) @ LinOp.partial(1)
        + LinOp.mul_by(v1) @ LinOp.partial(0)
        + LinOp.mul_by(v2) @ LinOp.partial(1)
        + LinOp.mul_by(v3) @ LinOp.partial(2)
        + LinOp.mul_by(w)
    )

    lines = []
    if not p.q_plus.is_zero():
        lines.append("y_plus=0")
    if not p.q_minus.is_zero():
        lines.append("y_minus=0")
    if not p.s1.is_zero():
        lines.append("y1=0")
    if not p.s2.is_zero():
        lines.append("y2=0")

    return Family3D(
        params=p,
        v1=v1, v2=v2, v3=v3,
        beta_plus=beta_plus, beta_minus=beta_minus,
        beta_plus_prime=beta_plus_prime, beta_minus_prime=beta_minus_prime,
        alpha1=alpha1, alpha2=alpha2,
        gamma1=gamma1, gamma2=gamma2,
        V3=v3_poly,
        w=w, V=v_pot, Vt=vt_pot, A=a_op,
        singular_lines=tuple(lines),
    )


_C_DIAG = (Scalar.of(1), Scalar.of(-1), Scalar.of(0))


def check_family(fam: Family3D, symmetry_ops: bool = True) -> CheckReport:
    """Every defining equation, exactly, in dependency order; then the
    full intertwining and (optionally) the fourth-order symmetry
    operators. The first failing entry names the broken balance."""
    report = CheckReport()
    v = (fam.v1, fam.v2, fam.v3)
    v_diff = fam.Vt - fam.V
    v_sum = fam.Vt + fam.V

    for i in range(3):
        for j in range(i, 3):
            c_ij = _C_DIAG[i] if i == j else Scalar.of(0)
            res = v[j].derive(i) + v[i].derive(j) - v_diff * c_ij
            report.add(f"second_order_balance_{i + 1}{j + 1}",
                       res.is_zero(), res)

    for i in range(3):
        res = (v_sum.derive(i) * _C_DIAG[i] + fam.w.derive(i) * Scalar.of(2)
               - v_diff * v[i])
        report.add(f"first_order_balance_{i + 1}", res.is_zero(), res)

    res = (v[0] * v_sum.derive(0) + v[1] * v_sum.derive(1)
           + v[2] * v_sum.derive(2) - v_diff * fam.w * Scalar.of(2))
    report.add("zeroth_order_balance", res.is_zero(), res)

    _, _, y_plus, y_minus = _family_ys(fam.params)
    res = (fam.alpha1 + fam.alpha2
           - (fam.v3 * (fam.beta_plus_prime + fam.beta_minus_prime)
              - y_plus * fam.beta_minus - y_minus * fam.beta_plus))
    report.add("separation_condition", res.is_zero(), res)

    h = hamiltonian(fam.V, dim=3)
    ht = hamiltonian(fam.Vt, dim=3)
    res_op = fam.A @ h - ht @ fam.A
    report.add("intertwine", res_op.is_zero(), res_op)

    if symmetry_ops:
        a_t = fam.A.adjoint()
        left = a_t @ fam.A
        res_op = h @ left - left @ h
        report.add("symmetry_op_left", res_op.is_zero(), res_op)
        right = fam.A @ a_t
        res_op = ht @ right - right @ ht
        report.add("symmetry_op_right", res_op.is_zero(), res_op)
    return report


def solve_w(v: Sequence[RationalExpr], V: RationalExpr,
            Vt: RationalExpr) -> RationalExpr:
    """Recover the zeroth-order coefficient from the potentials alone:
    w = v.grad(Vt+V) / (2(Vt-V)), then confirm the first-order balances."""
    if len(v) != 3:
        raise DomainError("expected three drift components")
    v_diff = Vt - V
    if v_diff.is_zero():
        raise DomainError(
            "degenerate: the potentials coincide, the defining relation "
            "cannot be divided")
    v_sum = Vt + V
    numer = v[0] * v_sum.derive(0) + v[1] * v_sum.derive(1) + v[2] * v_sum.derive(2)
    w = numer / (v_diff + v_diff)
    residuals = []
    for i in range(3):
        res = (v_sum.derive(i) * _C_DIAG[i] + w.derive(i) * Scalar.of(2)
               - v_diff * v[i])
        if not res.is_zero():
            residuals.append((i + 1, res))
    if residuals:
        listing = "; ".join(f"axis {i}: {res}" for i, res in residuals)
        raise ConstraintError(
            "first_order_balance",
            f"inconsistent drift/potential inputs: {listing}")
    return w


def standard_form_compare(fam: Family3D) -> CheckReport:
    """Shift x3 to remove the cubic term and compare against the closed
    standard forms; each difference must be an exact constant."""
    p = fam.params
    report = CheckReport()
    delta = -(p.h1 * INV_SQRT2)
    shifted_v = fam.V.shift((Scalar.of(0), Scalar.of(0), delta))
    shifted_vt = fam.Vt.shift((Scalar.of(0), Scalar.of(0), delta))

    x3 = _x(2)
    y1, y2, y_plus, y_minus = _family_ys(p)
    c_sq = p.c * p.c
    inv_8csq = (Scalar.of(8) * c_sq).inverse()
    three_q = Scalar(Fraction(3, 4))
    gap2 = p.m2 * HALF - Scalar.of(3) * c_sq * p.h1 * p.h1
    quad_coeff = (p.m2 * inv_8csq
                  - three_q * p.h1 * p.h1
                  + p.h2 * p.h2 * Scalar(Fraction(1, 8)))
    base = (
        x3 ** 4 * c_sq
        + x3 * x3 * ((y_plus * y_plus + y_minus * y_minus) * three_q + gap2)
        + x3 * ((y_plus * y_plus - y_minus * y_minus) * (p.h2 * HALF * INV_SQRT2)
                + p.q1 * INV_SQRT2)
        + (y1 ** 4 + y2 ** 4) * inv_8csq
        + (y1 * y1 + y2 * y2) * quad_coeff
        + (RationalExpr.of(p.s1, CARTESIAN_VARS) / (y1 * y1)
           + RationalExpr.of(p.s2, CARTESIAN_VARS) / (y2 * y2)) * inv_8csq
    )
    quarter = Scalar(Fraction(1, 4))
    two_c = p.c + p.c

    def q_term(sign: Scalar) -> RationalExpr:
        return (RationalExpr.of(p.q_plus * (p.q_plus + sign * two_c) * quarter,
                                CARTESIAN_VARS) / (y_plus * y_plus)
                + RationalExpr.of(p.q_minus * (p.q_minus + sign * two_c) * quarter,
                                  CARTESIAN_VARS) / (y_minus * y_minus))

    tail = p.c * p.h1 * INV_SQRT2
    std_v = base - x3 * p.c + q_term(Scalar.of(1)) + tail
    std_vt = base + x3 * p.c + q_term(Scalar.of(-1)) + tail

    for tag, shifted, std in (("standard_form_V", shifted_v, std_v),
                              ("standard_form_Vt", shifted_vt, std_vt)):
        diff = shifted - std
        if diff.is_constant():
            report.add(tag, True, diff,
                       detail=f"constant offset {scalar_text(diff.constant_value())}")
        else:
            report.add(tag, False, diff, detail="difference is not constant")
    return report


def verify_family_pair(pair: PartnerPair) -> CheckReport:
    """Re-verify a stored family pair from its own expressions.

    The stored component expressions (drift, beta/alpha/gamma splits)
    feed the defining equations, while V, Vt, and A come straight from
    the pair, so a hand-edited file fails on the named equation that its
    edit breaks.  Consistency entries tie the intertwiner's coefficient
    slots to the stored drift and zeroth-order term first.
    """
    if pair.kind != KIND_3D_FAMILY:
        raise DomainError(f"expected a family pair, got {pair.kind}")
    params = FamilyParams.from_dict(pair.extras["family_params"])
    texts = pair.extras.get("family_components")
    if texts is None:
        built = build_family(params)
        comps = {name: getattr(built, name) for name in _COMPONENT_KEYS}
    else:
        from .parsing import parse_expr

        comps = {}
        for name in _COMPONENT_KEYS:
            if name not in texts:
                raise DomainError(f"family components are missing {name}")
            value = parse_expr(texts[name])
            comps[name] = value if isinstance(value, RationalExpr) \
                else RationalExpr.of(value, CARTESIAN_VARS)
    v3_comp = comps.pop("V3")
    v3_poly = v3_comp.num if isinstance(v3_comp, RationalExpr) else v3_comp
    fam = Family3D(
        params=params,
        V3=v3_poly,
        V=pair.V,
        Vt=pair.Vt,
        A=pair.A,
        singular_lines=tuple(pair.extras.get("singular_lines", ())),
        **comps,
    )

    report = CheckReport()
    leading = LinOp.partial(0) @ LinOp.partial(0) \
        - LinOp.partial(1) @ LinOp.partial(1)
    second_part = LinOp({idx: c for idx, c in pair.A.terms.items()
                         if sum(idx) >= 2})
    res_op = second_part - leading
    report.add("intertwiner_leading", res_op.is_zero(), res_op)
    for axis, name in enumerate(("v1", "v2", "v3")):
        idx = tuple(1 if i == axis else 0 for i in range(3))
        res = pair.A.coeff(idx) - comps[name]
        report.add(f"intertwiner_drift_{axis + 1}", res.is_zero(), res)
    res = pair.A.coeff((0, 0, 0)) - fam.w
    report.add("intertwiner_zeroth", res.is_zero(), res)
    report.extend(check_family(fam))
    return report
