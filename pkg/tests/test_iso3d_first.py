"""First-order 3D constructions and Killing-field canonicalization."""
from fractions import Fraction

import pytest

from helpers import make_rng, rand_scalar
from isopair.errors import ConstraintError, DomainError, ParseError
from isopair.iso3d_first import (AXIAL, SCREW, TRANSLATION, TRIVIAL,
                                 build_axial, build_screw,
                                 build_translational, canonicalize_killing,
                                 killing_equation_residuals,
                                 verify_axial, verify_first_order,
                                 verify_killing, verify_screw,
                                 verify_translational)
from isopair.operators import CYLINDRICAL, LinOp
from isopair.pairs import (KIND_3D_AXIAL, KIND_3D_SCREW,
                           KIND_3D_TRANSLATIONAL)
from isopair.parsing import parse_expr
from isopair.scalars import Scalar
from isopair.trig import TrigPoly


def _rand_vec(r, nonzero=False):
    while True:
        vec = tuple(rand_scalar(r) for _ in range(3))
        if not nonzero or any(not v.is_zero() for v in vec):
            return vec


def _cross(u, v):
    return tuple(u[(i + 1) % 3] * v[(i + 2) % 3]
                 - u[(i + 2) % 3] * v[(i + 1) % 3] for i in range(3))


def test_killing_equation_always_satisfied():
    r = make_rng(401)
    for _ in range(10):
        a, b = _rand_vec(r), _rand_vec(r)
        assert all(p.is_zero() for p in killing_equation_residuals(a, b))


def test_canonical_cases():
    zero = (0, 0, 0)
    assert canonicalize_killing(zero, zero).case_tag == TRIVIAL
    kv = canonicalize_killing(zero, (0, 0, 3))
    assert kv.case_tag == TRANSLATION
    # an axis-aligned direction is rotated onto the first axis
    assert kv.canonical_b == (Scalar.of(3), Scalar.of(0), Scalar.of(0))

    kv = canonicalize_killing((2, 0, 0), (0, 0, 5))  # a.b = 0
    assert kv.case_tag == AXIAL
    assert kv.canonical_a == (Scalar.of(0), Scalar.of(0), Scalar.of(2))
    assert kv.sigma is None

    kv = canonicalize_killing((0, 0, 1), (1, 2, 3))
    assert kv.case_tag == SCREW
    assert kv.sigma == Scalar.of(3)  # (a.b)/|a|^2
    # the canonical field is a pure screw about the third axis
    assert kv.canonical_b == (Scalar.of(0), Scalar.of(0), Scalar.of(3))

    # non-axis-aligned input: no exact rotation exists in this scalar
    # field, so the rotation stays the identity but the tag is decided
    kv = canonicalize_killing((1, 1, 0), (1, -1, 0))
    assert kv.case_tag == AXIAL
    assert verify_killing(kv).ok


def test_killing_round_trips():
    r = make_rng(402)
    draws = []
    for _ in range(6):
        a = _rand_vec(r, nonzero=True)
        draws.append((a, _rand_vec(r)))                # generic (mostly screw)
        draws.append((a, _cross(a, _rand_vec(r))))      # forced axial
        draws.append(((Scalar.of(0),) * 3, _rand_vec(r, nonzero=True)))
    for a, b in draws:
        report = verify_killing(canonicalize_killing(a, b))
        assert report.ok, report.lines()


def test_translational_explicit():
    pair = build_translational("x", "x2^2 + x3^2", c=2)
    assert pair.kind == KIND_3D_TRANSLATIONAL
    assert pair.case_tag == TRANSLATION
    assert pair.V == parse_expr("x1^2 - 1 + x2^2 + x3^2 + 2")
    assert pair.Vt == parse_expr("x1^2 + 1 + x2^2 + x3^2 + 2")
    assert pair.A == LinOp.partial(0) + LinOp.mul_by(parse_expr("x1"))
    assert verify_translational(pair).ok


def test_translational_input_checks():
    with pytest.raises(ParseError):
        build_translational("x2", "x3^2")       # drift must be 1D
    with pytest.raises(ParseError):
        build_translational("x", "x1^2")        # spectator blind to x1
    # a pre-built spectator expression reaches the dependency check
    with pytest.raises(DomainError):
        build_translational("x", parse_expr("x1^2"))
    # the spectator may be spelled with y/z aliases
    pair = build_translational("x", "y^2 + z^2")
    assert pair.V == parse_expr("x1^2 - 1 + x2^2 + x3^2")


def test_axial_explicit():
    ap = build_axial("sin(phi)", "rho^2 + z^2")
    pair = ap.to_pair()
    assert pair.kind == KIND_3D_AXIAL and pair.frame == CYLINDRICAL
    cylvars = ("rho", "phi", "z")
    expected_v = parse_expr("(sin(phi)^2 - cos(phi))/rho^2 + rho^2 + z^2",
                            variables=cylvars)
    expected_vt = parse_expr("(sin(phi)^2 + cos(phi))/rho^2 + rho^2 + z^2",
                             variables=cylvars)
    assert pair.V == expected_v
    assert pair.Vt == expected_vt
    report = verify_axial(ap)
    assert report.ok, report.lines()


def test_axial_second_harmonic():
    ap = build_axial("cos(2*phi)", "z^2")
    assert verify_axial(ap).ok


def test_axial_input_checks():
    from isopair.polys import CYLINDRICAL_VARS, RationalExpr
    with pytest.raises(ParseError):
        build_axial("rho", "z^2")               # drift must be angular
    with pytest.raises(ParseError):
        build_axial("cos(phi)/rho", "z^2")      # rho blocked at parse time
    rho = RationalExpr.variable(0, CYLINDRICAL_VARS)
    with pytest.raises(DomainError):
        # pre-built drift with a radial coefficient reaches the deep check
        build_axial(TrigPoly.harmonic(1, "cos", coeff=rho), "z^2")
    with pytest.raises(ParseError):
        build_axial("sin(phi)", "cos(phi)")     # angle blocked in spectator
    with pytest.raises(DomainError):
        build_axial("sin(phi)", TrigPoly.harmonic(1, "cos"))


def test_screw_explicit():
    ss = build_screw(2, "cos(xi) + rho^2")
    pair = ss.to_pair()
    assert pair.kind == KIND_3D_SCREW
    assert pair.extras["b_z"] == Scalar.of(2)
    assert pair.V == pair.Vt  # the screw case is a symmetry, not a pairing
    report = verify_screw(ss)
    assert report.ok, report.lines()
    # the potential keeps its screw-combination tag
    assert pair.V.mode == ("xi", Scalar.of(2))


def test_screw_radial_potential():
    # the potential may only see rho and the screw angle; a bare-z term
    # would break the symmetry and is not even parseable here
    ss = build_screw(Fraction(1, 2), "rho^2 + cos(2*xi)/4")
    assert verify_screw(ss).ok
    with pytest.raises(ParseError):
        build_screw(Fraction(1, 2), "rho^2 + z^2")


def test_screw_input_checks():
    with pytest.raises(ConstraintError) as err:
        build_screw(2, "cos(phi)")              # phi alone breaks the screw
    assert "screw" in err.value.constraint
    with pytest.raises(DomainError):
        build_screw(0, "rho^2")                 # pitch must not vanish
    with pytest.raises(ParseError):
        build_screw(2, "x1^2")                  # cartesian text rejected


def test_dispatcher():
    pair = build_translational("x", "x2^2")
    assert verify_first_order(pair).ok
    assert verify_first_order(build_axial("sin(phi)", "z^2").to_pair()).ok
    assert verify_first_order(build_screw(1, "cos(xi)").to_pair()).ok
    from isopair.iso3d_second import FamilyParams, build_family
    fam_pair = build_family(FamilyParams.from_dict({"c": "1"})).to_pair()
    with pytest.raises(DomainError):
        verify_first_order(fam_pair)
