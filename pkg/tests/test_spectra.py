"""Finite-difference cross-validation: grids, eigensolves, matching,
intertwining residuals, and zero-mode detection."""
import math
from fractions import Fraction

import numpy as np
import pytest

from isopair.errors import ConfigError, DomainError, PoleError
from isopair.iso3d_first import build_translational
from isopair.iso3d_second import FamilyParams, build_family
from isopair.pairs import KIND_1D_ORDER1, PartnerPair
from isopair.parsing import parse_expr
from isopair.spectra import (BoxDomain, _greedy_match, _isolated_levels,
                             _pair_exprs, _zero_mode_certificate,
                             default_order, discretize, intertwine_numeric,
                             lowest_eigs, pair_spectrum)
from isopair.susy1d import build_order1


def _box1d(lo="-10", hi="10"):
    return BoxDomain.parse(f"{lo}:{hi}")


def test_box_parsing():
    box = BoxDomain.parse("-3:3,-3:3,0:1")
    assert box.dim == 3
    assert box.intervals[2] == (Fraction(0), Fraction(1))
    assert box.text() == "-3:3,-3:3,0:1"
    assert BoxDomain.parse("1/2:3").intervals[0] == (Fraction(1, 2), Fraction(3))
    for bad in ("0:0", "3:1", "1:2,3:4", "a:b", "1", "1:2:3"):
        with pytest.raises(ConfigError):
            BoxDomain.parse(bad)
    with pytest.raises(ConfigError):
        BoxDomain.parse("0:1", frame="sideways")
    with pytest.raises(ConfigError):
        BoxDomain.parse("0:1", exclusion_margin=Fraction(-1))


def test_box_grid_geometry():
    box = BoxDomain.parse("0:1")
    pts = box.axis_points(0, 3)
    assert pts == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert box.spacings(3) == (Fraction(1, 4),)
    corners = BoxDomain.parse("0:1,2:3,4:5").corners()
    assert len(corners) == 8
    assert (Fraction(0), Fraction(2), Fraction(4)) in corners


def test_discretize_textbook_tridiagonal():
    grid = discretize(parse_expr("0"), BoxDomain.parse("0:1"), 3, order=2)
    dense = grid.matrix.toarray()
    expected = np.array([[32.0, -16.0, 0.0],
                         [-16.0, 32.0, -16.0],
                         [0.0, -16.0, 32.0]])
    assert np.array_equal(dense, expected)


def test_discretized_operator_is_symmetric():
    box = BoxDomain.parse("-2:2,-1:3,0:2")
    grid = discretize(parse_expr("x1^3*x2 - x3"), box, 6, order=4)
    asym = grid.matrix - grid.matrix.T
    assert asym.nnz == 0


def test_box_eigenvalue_oracle():
    # particle in a box [0, 1]: Dirichlet eigenvalues (m*pi)^2
    box = BoxDomain.parse("0:1")
    grid2 = discretize(parse_expr("0"), box, 400, order=2)
    vals2, _ = lowest_eigs(grid2, 3)
    for m in range(1, 4):
        exact = (m * math.pi) ** 2
        assert abs(vals2[m - 1] - exact) < exact * 1e-4


def test_order4_beats_order2_for_confined_states():
    box = BoxDomain.parse("-8:8")
    v = parse_expr("x^2")  # ground level exactly 1
    errs = {}
    for order in (2, 4):
        grid = discretize(v, box, 100, order=order)
        vals, _ = lowest_eigs(grid, 1)
        errs[order] = abs(vals[0] - 1.0)
    assert errs[4] < 1e-4
    assert errs[4] < errs[2] / 10


def test_lowest_eigs_input_guards():
    grid = discretize(parse_expr("0"), BoxDomain.parse("0:1"), 5, order=2)
    with pytest.raises(ConfigError):
        lowest_eigs(grid, 6)  # more levels than grid dimensions
    with pytest.raises(ConfigError):
        lowest_eigs(grid, 0)


def test_greedy_match():
    matches, um_h, um_ht = _greedy_match([0.0, 2.0, 4.0], [2.0, 4.0, 6.0], 0.5)
    assert matches == [(1, 0, 0.0), (2, 1, 0.0)]
    assert um_h == [0] and um_ht == [2]
    # ties go to the lower index
    matches, um_h, um_ht = _greedy_match([1.0, 1.0], [1.0], 0.1)
    assert matches == [(0, 0, 0.0)]
    assert um_h == [1] and um_ht == []


def test_default_orders():
    assert default_order(1) == 2
    assert default_order(3) == 4


def test_oscillator_pair_spectrum():
    pair = build_order1("x")
    report = pair_spectrum(pair, _box1d(), n=800, k=4, match_tol=5e-3)
    # H = -d^2 + x^2 - 1 has levels 0, 2, 4, ...; the partner starts at 2
    for i, exact in enumerate((0.0, 2.0, 4.0, 6.0)):
        assert abs(report.eigs_h[i] - exact) < 5e-3
    for j, exact in enumerate((2.0, 4.0, 6.0, 8.0)):
        assert abs(report.eigs_ht[j] - exact) < 5e-3
    assert report.unmatched_h == [0]
    assert report.unmatched_ht == [3]
    assert len(report.matches) == 3
    # matched excited states satisfy the intertwining on the grid
    for ih, _, _ in report.matches:
        res = report.intertwine[ih]
        assert not res.zero_mode
        assert res.residual < 5e-2


def test_refinement_improves_quadratically():
    pair = build_order1("x")
    estimates = []
    for n in (250, 500, 1000):
        report = pair_spectrum(pair, _box1d(), n=n, k=1, match_tol=1e-9)
        estimates.append(report.eigs_h[0])
    coarse_step = abs(estimates[0] - estimates[1])
    fine_step = abs(estimates[1] - estimates[2])
    assert coarse_step >= 3 * fine_step


def test_csv_shape_and_determinism():
    pair = build_order1("x")
    report_a = pair_spectrum(pair, _box1d(), n=300, k=3, match_tol=5e-2)
    report_b = pair_spectrum(pair, _box1d(), n=300, k=3, match_tol=5e-2)
    assert report_a.to_csv() == report_b.to_csv()
    lines = report_a.to_csv().splitlines()
    assert lines[0] == "index,E_H,E_Htilde,matched,abs_diff,intertwine_residual"
    rows = (len(report_a.matches) + len(report_a.unmatched_h)
            + len(report_a.unmatched_ht))
    assert len(lines) == 1 + rows
    assert report_a.to_csv().endswith("\n")
    assert report_a.summary() == report_b.summary()


def test_sparse_path_determinism():
    # 17^3 = 4913 exceeds the dense limit, forcing the Lanczos branch
    pair = build_translational("x", "x2^2 + x3^2")
    box = BoxDomain.parse("-6:6,-6:6,-6:6")
    rep_a = pair_spectrum(pair, box, n=17, k=2, match_tol=5e-1, order=4)
    rep_b = pair_spectrum(pair, box, n=17, k=2, match_tol=5e-1, order=4)
    assert rep_a.to_csv() == rep_b.to_csv()
    assert rep_a.eigs_h[0] == rep_b.eigs_h[0]


def test_rotated_frame_spectral_invariance():
    # a rotation-symmetric potential must give identical box spectra in
    # the standard and the rotated frames
    pair = build_translational("x", "x2^2 + x3^2")  # V = r^2 - 1
    std = BoxDomain.parse("-5:5,-5:5,-5:5")
    rot = BoxDomain.parse("-5:5,-5:5,-5:5", frame="rot45")
    rep_std = pair_spectrum(pair, std, n=12, k=3, match_tol=5e-1, order=4)
    rep_rot = pair_spectrum(pair, rot, n=12, k=3, match_tol=5e-1, order=4)
    for a, b in zip(rep_std.eigs_h, rep_rot.eigs_h):
        assert abs(a - b) <= 1e-6
    for a, b in zip(rep_std.eigs_ht, rep_rot.eigs_ht):
        assert abs(a - b) <= 1e-6


def test_grid_ratio_zero_mode_flag():
    # at fourth order the oscillator ground state is resolved so well
    # that ||A psi|| / ||psi|| drops below the 1e-6 ratio threshold
    pair = build_order1("x")
    report = pair_spectrum(pair, _box1d(), n=1500, k=1, match_tol=5e-3,
                           order=4)
    res = report.intertwine[0]
    assert res.zero_mode
    assert not res.certified          # plain ratio detection, no symmetry
    assert res.ratio < 1e-6
    assert res.residual_text() == "ZERO_MODE"
    assert report.summary()["zero_modes"] == [0]
    csv = report.to_csv()
    assert "ZERO_MODE" in csv.splitlines()[1]


def test_zero_mode_excluded_from_residual_summary():
    pair = build_order1("x")
    report = pair_spectrum(pair, _box1d(), n=1500, k=2, match_tol=5e-3,
                           order=4)
    summary = report.summary()
    assert summary["zero_modes"] == [0]
    assert summary["max_intertwine_residual"] < 5e-2


def test_mismatched_pair_has_large_residual():
    good = build_order1("x")
    bad = PartnerPair(kind=KIND_1D_ORDER1, dim=1, frame="cartesian", order=1,
                      V=good.V, Vt=good.V, A=good.A, c=good.c,
                      seed=dict(good.seed))
    box = _box1d()
    grid = discretize(good.V, box, 800, order=2)
    vals, vecs = lowest_eigs(grid, 2)
    # state 1 is not a zero mode of A; against the wrong partner the
    # intertwining defect is order one
    res = intertwine_numeric(bad, (vals[1], vecs[:, 1]), box, 800)
    assert not res.zero_mode
    assert res.residual > 0.1


def test_intertwine_standalone_matches_report():
    pair = build_order1("x")
    box = _box1d()
    report = pair_spectrum(pair, box, n=400, k=2, match_tol=5e-3)
    grid = discretize(pair.V, box, 400, order=2)
    vals, vecs = lowest_eigs(grid, 2)
    res = intertwine_numeric(pair, (vals[1], vecs[:, 1]), box, 400)
    assert res.residual == pytest.approx(report.intertwine[1].residual,
                                         rel=1e-9)


def test_certificate_detection():
    fam_pair = build_family(FamilyParams(c=1)).to_pair()
    v, vt, a, _ = _pair_exprs(fam_pair, "standard")
    assert _zero_mode_certificate(v, vt, a) == ("swap12", "mirror3")
    v, vt, a, _ = _pair_exprs(fam_pair, "rot45")
    assert _zero_mode_certificate(v, vt, a) is not None

    pair1d = build_order1("x")
    v, vt, a, _ = _pair_exprs(pair1d, "standard")
    assert _zero_mode_certificate(v, vt, a) is None

    trans = build_translational("x", "x2^2 + x3^2")
    v, vt, a, _ = _pair_exprs(trans, "standard")
    assert _zero_mode_certificate(v, vt, a) is None


def test_isolated_levels():
    vals = [0.0, 3.0, 3.0 + 1e-9, 5.0]
    assert _isolated_levels(vals, 4) == [True, False, False, False]
    # the top level has no upper neighbor, so it is never isolated
    assert _isolated_levels([1.0, 2.0], 2) == [True, False]


def test_margin_checks():
    pair = build_family(FamilyParams(c=1, s1=1)).to_pair()  # wall at x1 = 0
    clear = BoxDomain.parse("1:3,-1:1,-1:1")
    v, vt, a, forms = _pair_exprs(pair, "standard")
    assert set(forms) == {"y1"}
    # a corner exactly on the singular plane is a pole
    with pytest.raises(PoleError):
        pair_spectrum(pair, BoxDomain.parse("0:2,-1:1,-1:1"), n=4, k=1,
                      match_tol=1e-2)
    # closer than one grid spacing (the default margin) is rejected
    with pytest.raises(DomainError):
        pair_spectrum(pair, BoxDomain.parse("1/10:2,-1:1,-1:1"), n=10, k=1,
                      match_tol=1e-2)
    # an explicit smaller margin admits the same box
    tight = BoxDomain.parse("1/10:2,-1:1,-1:1",
                            exclusion_margin=Fraction(1, 20))
    report = pair_spectrum(pair, tight, n=6, k=1, match_tol=1e-2)
    assert report.n == 6


def test_box_dimension_must_match_pair():
    pair = build_order1("x")
    with pytest.raises(ConfigError):
        pair_spectrum(pair, BoxDomain.parse("-1:1,-1:1,-1:1"), n=4, k=1,
                      match_tol=1e-2)


def test_cylindrical_pairs_have_no_grid():
    from isopair.iso3d_first import build_axial
    pair = build_axial("sin(phi)", "z^2").to_pair()
    with pytest.raises(DomainError):
        pair_spectrum(pair, BoxDomain.parse("-1:1,-1:1,-1:1"), n=4, k=1,
                      match_tol=1e-2)
