"""Finite-difference cross-validation of partner spectra.

Partner Hamiltonians H = -lap + V and Ht = -lap + Vt are discretized on a
rectangular Dirichlet box with central-difference stencils (order 2 or 4),
their lowest eigenvalues are matched greedily within a tolerance, and the
intertwining identity is re-measured numerically on each eigenvector as
the relative residual ||(Ht - E) A psi|| / ||A psi||.

Conventions
-----------
* A box axis [lo, hi] with n interior points has exact spacing
  h = (hi - lo)/(n + 1); the grid is lo + h, ..., hi - h and the function
  vanishes on the boundary (Dirichlet).  For V = 0 in 1D at order 2 this
  gives the textbook tridiagonal operator with diagonal 2/h^2 and
  off-diagonal -1/h^2.
* Dense symmetric solves are used up to dimension 4000; larger problems go
  through a Lanczos iteration started from the normalized all-ones vector,
  so results are deterministic without a seed.
* Boxes for potentials with inverse-square walls must keep every point of
  the box at least ``exclusion_margin`` away from each singular plane (in
  the value of the defining linear form); the margin defaults to one grid
  spacing.  The check is exact: the forms are affine, so their minima over
  the box are attained at corners, which are evaluated in Q(sqrt2).
* The rotated frame turns the axes 45 degrees about the third one, so the
  singular planes of the two-parameter family become coordinate planes and
  a margin-respecting box fits inside the wedge of definition.
* Intertwining residuals are measured over the stencil-complete core of
  the grid: a Dirichlet eigenvector vanishes on the wall but its A-image
  does not, so wall-touching rows of the composed stencils measure the
  artificial boundary closure rather than the identity.
* Zero modes of A are flagged two ways: a grid ratio ||A psi||/||psi||
  below 1e-6, or an exact symmetry certificate.  When the pair admits
  an involution S (axis swap or mirror) with S V S = V and S A S = -A
  plus a mirror M with M Vt M = V, the operator M A commutes with H and
  flips S-parity, so every isolated H-level is annihilated by A in the
  whole space; its grid image is pure wall leakage, whose size does not
  shrink with the mesh, so only the certificate can recognize it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sparse
import scipy.sparse.linalg as sparse_linalg

from .errors import ConfigError, DomainError, PoleError, SolverError
from .operators import CARTESIAN, LinOp, rotate45_op
from .pairs import PartnerPair
from .parsing import parse_expr
from .polys import CARTESIAN_VARS, Poly, RationalExpr, rotate45
from .scalars import Scalar

STANDARD = "standard"
ROTATED45 = "rot45"

DENSE_LIMIT = 4000
EIG_RESIDUAL_BOUND = 1e-8
ZERO_MODE_RATIO = 1e-6

_FRAMES = (STANDARD, ROTATED45)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ConfigError(f"expected an exact rational bound, got {value!r}")


@dataclass(frozen=True)
class BoxDomain:
    """Rectangular domain: per-axis exact rational intervals.

    frame selects the coordinate axes: STANDARD uses (x1, x2, x3);
    ROTATED45 aligns the first two axes with the diagonals
    (x1 +- x2)/sqrt2.  exclusion_margin (None = one grid spacing) is the
    minimum admissible value of each singular linear form over the box.
    """

    intervals: Tuple[Tuple[Fraction, Fraction], ...]
    frame: str = STANDARD
    exclusion_margin: Optional[Fraction] = None

    def __post_init__(self):
        clean = []
        for pair_ in self.intervals:
            lo, hi = (_as_fraction(v) for v in pair_)
            if not lo < hi:
                raise ConfigError(f"box interval must satisfy lo < hi, got {lo}:{hi}")
            clean.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(clean))
        if self.frame not in _FRAMES:
            raise ConfigError(f"unknown frame {self.frame!r}")
        if self.exclusion_margin is not None:
            margin = _as_fraction(self.exclusion_margin)
            if margin < 0:
                raise ConfigError("exclusion margin must be nonnegative")
            object.__setattr__(self, "exclusion_margin", margin)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    @staticmethod
    def parse(text: str, frame: str = STANDARD,
              exclusion_margin=None) -> "BoxDomain":
        """Parse 'lo:hi[,lo:hi[,lo:hi]]' with exact rational bounds."""
        intervals = []
        for chunk in text.split(","):
            parts = chunk.split(":")
            if len(parts) != 2:
                raise ConfigError(f"box axis must be 'lo:hi', got {chunk!r}")
            try:
                intervals.append((_as_fraction(parts[0].strip()),
                                  _as_fraction(parts[1].strip())))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad box bound in {chunk!r}: {exc}") from None
        if len(intervals) not in (1, 3):
            raise ConfigError("box must have one or three axes")
        return BoxDomain(tuple(intervals), frame, exclusion_margin)

    def text(self) -> str:
        return ",".join(f"{lo}:{hi}" for lo, hi in self.intervals)

    def spacings(self, n: int) -> Tuple[Fraction, ...]:
        return tuple((hi - lo) / (n + 1) for lo, hi in self.intervals)

    def axis_points(self, axis: int, n: int) -> List[Fraction]:
        lo, hi = self.intervals[axis]
        h = (hi - lo) / (n + 1)
        return [lo + h * (i + 1) for i in range(n)]

    def corners(self) -> List[Tuple[Fraction, ...]]:
        pts = [()]
        for lo, hi in self.intervals:
            pts = [p + (v,) for p in pts for v in (lo, hi)]
        return pts


# -- stencils -------------------------------------------------------------

def _check_order(order: int):
    if order not in (2, 4):
        raise ConfigError(f"stencil order must be 2 or 4, got {order}")


def _second_derivative(n: int, h: float, order: int) -> sparse.spmatrix:
    _check_order(order)
    if order == 2:
        return sparse.diags(
            [np.full(n - 1, 1.0), np.full(n, -2.0), np.full(n - 1, 1.0)],
            [-1, 0, 1]) / (h * h)
    weights = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
    bands = [np.full(n - abs(k), weights[k + 2]) for k in range(-2, 3)]
    return sparse.diags(bands, [-2, -1, 0, 1, 2]) / (h * h)


def _first_derivative(n: int, h: float, order: int) -> sparse.spmatrix:
    _check_order(order)
    if order == 2:
        return sparse.diags(
            [np.full(n - 1, -0.5), np.full(n - 1, 0.5)], [-1, 1]) / h
    weights = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
    bands = [np.full(n - abs(k), weights[k + 2]) for k in (-2, -1, 1, 2)]
    return sparse.diags(bands, [-2, -1, 1, 2]) / h


# -- grid evaluation ------------------------------------------------------

def _as_ratexpr(expr) -> RationalExpr:
    if isinstance(expr, str):
        expr = parse_expr(expr)
    if isinstance(expr, Poly):
        return RationalExpr(expr)
    if isinstance(expr, RationalExpr):
        return expr
    if isinstance(expr, Scalar):
        return RationalExpr.of(expr, CARTESIAN_VARS)
    raise DomainError(
        "numerical discretization supports cartesian polynomial or rational "
        f"potentials, not {type(expr).__name__}")


def _poly_on_grid(poly: Poly, axes: Sequence[np.ndarray]) -> np.ndarray:
    dim = len(axes)
    grids = np.meshgrid(*axes, indexing="ij") if dim > 1 else [axes[0]]
    total = np.zeros(grids[0].shape)
    for exps, coeff in poly.terms.items():
        if any(exps[axis] and axis >= dim for axis in range(3)):
            raise DomainError(
                "potential depends on an axis outside the box dimension")
        term = float(coeff) * np.ones(grids[0].shape)
        for axis in range(dim):
            if exps[axis]:
                term = term * grids[axis] ** exps[axis]
        total = total + term
    return total


def _exact_point(box: BoxDomain, n: int, flat_index: int,
                 shape: Tuple[int, ...]) -> Tuple[Fraction, ...]:
    multi = np.unravel_index(flat_index, shape)
    coords = []
    for axis, i in enumerate(multi):
        coords.append(box.axis_points(axis, n)[i])
    while len(coords) < 3:
        coords.append(Fraction(0))
    return tuple(coords)


def _values_on_grid(expr: RationalExpr, box: BoxDomain, n: int,
                    axes: Sequence[np.ndarray]) -> np.ndarray:
    """Pointwise values of num/den with an exact pole check.

    Grid points where the denominator is numerically tiny are re-evaluated
    in exact arithmetic; only exact zeros are poles.
    """
    num = _poly_on_grid(expr.num, axes)
    if expr.den.is_constant():
        den_value = float(expr.den.eval((0, 0, 0)))
        return num / den_value
    den = _poly_on_grid(expr.den, axes)
    scale = max(1.0, float(np.max(np.abs(den))))
    suspects = np.nonzero(np.abs(den).ravel() <= 1e-12 * scale)[0]
    for flat in suspects:
        point = _exact_point(box, n, int(flat), den.shape)
        if expr.den.eval(point).is_zero():
            raise PoleError(point)
    return num / den


# -- grid operators -------------------------------------------------------

@dataclass(frozen=True)
class GridOperator:
    """Sparse symmetric discretization of -lap + V on a Dirichlet box."""

    dim: int
    n: int
    spacings: Tuple[float, ...]
    matrix: sparse.spmatrix
    box: BoxDomain
    order: int

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _grid_axes(box: BoxDomain, n: int) -> List[np.ndarray]:
    return [np.array([float(p) for p in box.axis_points(axis, n)])
            for axis in range(box.dim)]


def _kron_chain(mats: Sequence[sparse.spmatrix]) -> sparse.spmatrix:
    return reduce(lambda a, b: sparse.kron(a, b, format="csr"), mats)


def _axis_matrices(box: BoxDomain, n: int, order: int,
                   derivative_orders: Sequence[int]) -> sparse.spmatrix:
    mats = []
    for axis in range(box.dim):
        h = float(box.spacings(n)[axis])
        d = derivative_orders[axis]
        if d == 0:
            mats.append(sparse.identity(n, format="csr"))
        elif d == 1:
            mats.append(_first_derivative(n, h, order).tocsr())
        elif d == 2:
            mats.append(_second_derivative(n, h, order).tocsr())
        else:
            raise DomainError(
                "grid operators support derivative order <= 2 per axis")
    return _kron_chain(mats)


def discretize(V, box: BoxDomain, n: int, order: int = 2) -> GridOperator:
    """Central-difference matrix of -lap + V with Dirichlet walls."""
    _check_order(order)
    if n < 1:
        raise ConfigError("need at least one interior grid point")
    expr = _as_ratexpr(V)
    axes = _grid_axes(box, n)
    values = _values_on_grid(expr, box, n, axes).ravel()
    total = sparse.diags(values, format="csr")
    for axis in range(box.dim):
        orders = [0] * box.dim
        orders[axis] = 2
        total = total - _axis_matrices(box, n, order, orders)
    spacings = tuple(float(h) for h in box.spacings(n))
    return GridOperator(dim=box.dim, n=n, spacings=spacings,
                        matrix=total.tocsr(), box=box, order=order)


def operator_matrix(op: LinOp, box: BoxDomain, n: int,
                    order: int = 2) -> sparse.spmatrix:
    """Discretize a differential operator with the same stencils."""
    if op.frame != CARTESIAN:
        raise DomainError("grid operators are cartesian only")
    _check_order(order)
    axes = _grid_axes(box, n)
    size = n ** box.dim
    total = sparse.csr_matrix((size, size))
    for alpha, coeff in op.terms.items():
        if any(alpha[axis] and axis >= box.dim for axis in range(3)):
            raise DomainError(
                "operator differentiates an axis outside the box dimension")
        mat = _axis_matrices(box, n, order, alpha[:box.dim])
        values = _values_on_grid(_as_ratexpr(coeff), box, n, axes).ravel()
        total = total + sparse.diags(values, format="csr") @ mat
    return total.tocsr()


# -- eigensolver ----------------------------------------------------------

def lowest_eigs(operator, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """k smallest eigenpairs, ascending; deterministic.

    Dense symmetric solve up to dimension 4000, Lanczos above it (started
    from the all-ones vector).  Every returned pair is certified to satisfy
    ||M v - lambda v|| <= 1e-8 ||v||.
    """
    matrix = operator.matrix if isinstance(operator, GridOperator) else operator
    dim = matrix.shape[0]
    if k < 1:
        raise ConfigError("need k >= 1 eigenvalues")
    if k >= dim:
        raise ConfigError(
            f"k = {k} eigenvalues requested from a dimension-{dim} operator")
    if dim <= DENSE_LIMIT:
        dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)
        vals, vecs = scipy.linalg.eigh(dense, subset_by_index=[0, k - 1])
    else:
        v0 = np.ones(dim) / np.sqrt(dim)
        ncv = min(dim - 1, max(100, 8 * k))
        try:
            vals, vecs = sparse_linalg.eigsh(
                matrix, k=k, which="SA", v0=v0, ncv=ncv, maxiter=5000, tol=0)
        except sparse_linalg.ArpackNoConvergence as exc:
            got = len(exc.eigenvalues)
            raise SolverError(
                f"eigensolver converged only {got} of {k} pairs "
                f"(dimension {dim})") from exc
        order_idx = np.argsort(vals)
        vals, vecs = vals[order_idx], vecs[:, order_idx]
    for i in range(k):
        v = vecs[:, i]
        residual = np.linalg.norm(matrix @ v - vals[i] * v)
        bound = EIG_RESIDUAL_BOUND * np.linalg.norm(v)
        if residual > bound:
            raise SolverError(
                f"eigenpair {i} residual {residual:.3e} exceeds {bound:.3e}")
    return vals, vecs


# -- intertwining on the grid ----------------------------------------------

@dataclass(frozen=True)
class IntertwineResult:
    """Numeric intertwining quality for one eigenpair of H.

    ratio = ||A psi|| / ||psi||; when it is below 1e-6 the vector is a
    zero mode of A and the residual is not meaningful (stored as 0).
    ``certified`` marks zero modes established through an exact symmetry
    certificate of the pair rather than the grid ratio: a whole-space
    zero mode keeps a finite grid ratio (Dirichlet wall leakage), so the
    ratio test alone cannot see it.
    """

    residual: float
    ratio: float
    zero_mode: bool
    certified: bool = False

    def residual_text(self) -> str:
        return "ZERO_MODE" if self.zero_mode else f"{self.residual:.12g}"


def _core_mask(shape: Tuple[int, ...], depth: int) -> np.ndarray:
    """Flat boolean mask of points at least `depth` layers from every wall.

    A box eigenvector vanishes on the wall, but its image under A does
    not, so rows of a composed stencil that reach across the wall measure
    the artificial Dirichlet closure instead of the operator identity.
    The residual norm therefore runs over the stencil-complete core; when
    the grid is too small to have one, the full grid is used.
    """
    if depth <= 0 or any(s <= 2 * depth for s in shape):
        return np.ones(int(np.prod(shape)), dtype=bool)
    mask = np.zeros(shape, dtype=bool)
    core = tuple(slice(depth, s - depth) for s in shape)
    mask[core] = True
    return mask.ravel()


def _intertwine_vector(a_matrix, ht_matrix, energy: float, psi: np.ndarray,
                       shape: Tuple[int, ...], order: int) -> IntertwineResult:
    image = a_matrix @ psi
    norm_in = np.linalg.norm(psi)
    norm_img = np.linalg.norm(image)
    ratio = norm_img / norm_in if norm_in else 0.0
    if ratio < ZERO_MODE_RATIO:
        return IntertwineResult(residual=0.0, ratio=ratio, zero_mode=True)
    # composing A (reach order//2) with Ht (another order//2) widens the
    # stencil to depth 2*(order//2) = order
    mask = _core_mask(shape, order)
    defect = ht_matrix @ image - energy * image
    norm_core = np.linalg.norm(image[mask])
    if norm_core == 0.0:
        norm_core = norm_img
    residual = np.linalg.norm(defect[mask]) / norm_core
    return IntertwineResult(residual=residual, ratio=ratio, zero_mode=False)


def _pair_exprs(pair: PartnerPair, frame: str):
    """Potentials, intertwiner, and singular forms in the requested frame."""
    if pair.frame != CARTESIAN:
        raise DomainError(
            "numerical spectra are computed for cartesian-frame pairs only")
    v, vt, a = pair.V, pair.Vt, pair.A
    forms = {}
    for name, text in pair.extras.get("singular_forms", {}).items():
        form = parse_expr(text)
        forms[name] = form if isinstance(form, Poly) else form.num
    if frame == ROTATED45:
        v = rotate45(_as_ratexpr(v))
        vt = rotate45(_as_ratexpr(vt))
        a = rotate45_op(a)
        forms = {name: rotate45(RationalExpr(f)).num for name, f in forms.items()}
    return v, vt, a, forms


# -- symmetry-certified zero modes ------------------------------------------
#
# When the pair admits an exact involution pair (S, M) with
#     S V = V,  S A S = -A,  M Vt = V,  S M = M S,
# the operator B = M A commutes with H and anticommutes with S, so every
# ISOLATED eigenvalue of H carries a state annihilated by A: B psi = mu psi
# forces mu = -mu = 0 because B flips the state's S-parity.  Genuinely
# mapped states then sit in exactly degenerate S-even/S-odd pairs.  On a
# finite Dirichlet box such an annihilated state still has a nonzero
# grid image ||A psi|| ~ wall leakage, so the ratio test alone cannot
# recognize it; the certificate is exact symbolic algebra and is checked
# in the frame the numerics run in.

_SWAP01 = "swap12"
_MIRRORS = ("mirror1", "mirror2", "mirror3")


def _involution_reps(kind: str):
    x = [Poly.variable(axis, CARTESIAN_VARS) for axis in range(3)]
    if kind == _SWAP01:
        return [x[1], x[0], x[2]]
    axis = _MIRRORS.index(kind)
    reps = list(x)
    reps[axis] = -x[axis]
    return reps


def _involution_expr(expr, kind: str):
    reps = _involution_reps(kind)
    return expr.subst(reps)


def _involution_op(op: LinOp, kind: str) -> LinOp:
    reps = _involution_reps(kind)
    terms = {}
    for alpha, coeff in op.terms.items():
        c = coeff.subst(reps)
        if kind == _SWAP01:
            idx = (alpha[1], alpha[0], alpha[2])
        else:
            axis = _MIRRORS.index(kind)
            idx = alpha
            if alpha[axis] % 2:
                c = -c
        terms[idx] = c  # involutions permute multi-indices bijectively
    return LinOp(terms)


def _zero_mode_certificate(v, vt, a: LinOp) -> Optional[Tuple[str, str]]:
    """Find (S, M) certifying that isolated H-levels are zero modes of A."""
    v = _as_ratexpr(v)
    vt = _as_ratexpr(vt)
    for s_kind in (_SWAP01,) + _MIRRORS:
        if not (_involution_expr(v, s_kind) - v).is_zero():
            continue
        if not (_involution_op(a, s_kind) + a).is_zero():
            continue
        if s_kind == _SWAP01:
            connectors = ("mirror3",)
        else:
            connectors = tuple(m for m in _MIRRORS if m != s_kind)
        for m_kind in connectors:
            if (_involution_expr(vt, m_kind) - v).is_zero():
                return s_kind, m_kind
    return None


_ISOLATION_RTOL = 1e-6        # spectral gap that separates "isolated" from
                              # "exactly degenerate pair" (observed: 1e-13
                              # FD splitting vs 1e-2 genuine gaps)
_CERTIFIED_RATIO_GUARD = 0.5  # a certified zero mode's grid image is wall
                              # leakage, far below a genuinely mapped state


def _isolated_levels(vals: Sequence[float], count: int) -> List[bool]:
    """Isolation flags for the first `count` of the sorted eigenvalues.

    A level is isolated when both neighbor gaps exceed
    1e-6 * max(1, |E|).  The topmost computed level has no upper
    neighbor, so it is never declared isolated; callers solve a couple
    of extra levels to give every reported one an upper neighbor.
    """
    flags = []
    for i in range(count):
        tol = _ISOLATION_RTOL * max(1.0, abs(vals[i]))
        lo_gap = vals[i] - vals[i - 1] if i > 0 else float("inf")
        hi_gap = vals[i + 1] - vals[i] if i + 1 < len(vals) else -1.0
        flags.append(lo_gap > tol and hi_gap > tol)
    return flags


def _check_margins(box: BoxDomain, n: int, forms: Dict[str, Poly]):
    """Exact wedge check: every singular form >= margin over the box.

    The forms are affine, so the minimum over the box is attained at a
    corner; corners are evaluated exactly in Q(sqrt2).
    """
    if not forms:
        return
    margin = box.exclusion_margin
    if margin is None:
        margin = max(box.spacings(n))
    margin_scalar = Scalar(Fraction(margin))
    for name, form in forms.items():
        if form.total_degree() > 1:
            raise DomainError(f"singular form {name} is not affine")
        for corner in box.corners():
            point = tuple(corner) + (Fraction(0),) * (3 - len(corner))
            value = form.eval(point)
            if (value - margin_scalar).sign() < 0:
                raise PoleError(point) if value.is_zero() else DomainError(
                    f"box violates the exclusion margin {margin} for the "
                    f"singular plane {name} = 0 (corner value {value})")


# -- spectrum report --------------------------------------------------------

@dataclass
class SpectrumReport:
    """Matched spectra of a partner pair plus intertwining residuals."""

    box: BoxDomain
    n: int
    k: int
    order: int
    match_tol: float
    eigs_h: List[float]
    eigs_ht: List[float]
    matches: List[Tuple[int, int, float]]
    unmatched_h: List[int]
    unmatched_ht: List[int]
    intertwine: Dict[int, IntertwineResult] = field(default_factory=dict)

    @property
    def intertwine_residuals(self) -> List[IntertwineResult]:
        """Residuals for matched pairs, in match order."""
        return [self.intertwine[ih] for ih, _, _ in self.matches
                if ih in self.intertwine]

    def rows(self):
        entries = []
        for ih, it, diff in self.matches:
            entries.append((self.eigs_h[ih], 0, self.eigs_h[ih],
                            self.eigs_ht[it], True, diff,
                            self.intertwine.get(ih)))
        for ih in self.unmatched_h:
            entries.append((self.eigs_h[ih], 1, self.eigs_h[ih], None,
                            False, None, self.intertwine.get(ih)))
        for it in self.unmatched_ht:
            entries.append((self.eigs_ht[it], 2, None, self.eigs_ht[it],
                            False, None, None))
        entries.sort(key=lambda row: (row[0], row[1]))
        return [row[2:] for row in entries]

    def to_csv(self) -> str:
        lines = ["index,E_H,E_Htilde,matched,abs_diff,intertwine_residual"]
        for index, row in enumerate(self.rows()):
            e_h, e_ht, matched, diff, res = row
            cells = [
                str(index),
                "" if e_h is None else f"{e_h:.12g}",
                "" if e_ht is None else f"{e_ht:.12g}",
                "1" if matched else "0",
                "" if diff is None else f"{diff:.12g}",
                "" if res is None else res.residual_text(),
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        residuals = [r.residual for r in self.intertwine.values()
                     if not r.zero_mode]
        return {
            "box": self.box.text(),
            "frame": self.box.frame,
            "n": self.n,
            "k": self.k,
            "stencil_order": self.order,
            "match_tol": self.match_tol,
            "matched": len(self.matches),
            "max_abs_diff": max((d for _, _, d in self.matches), default=0.0),
            "max_intertwine_residual": max(residuals, default=0.0),
            "unmatched_H": [self.eigs_h[i] for i in self.unmatched_h],
            "unmatched_Htilde": [self.eigs_ht[i] for i in self.unmatched_ht],
            "zero_modes": sorted(i for i, r in self.intertwine.items()
                                 if r.zero_mode),
        }


def _greedy_match(eigs_h: Sequence[float], eigs_ht: Sequence[float],
                  tol: float):
    """Two-pointer greedy matching of sorted spectra; ties to lower index."""
    matches, unmatched_h, unmatched_ht = [], [], []
    i = j = 0
    while i < len(eigs_h) and j < len(eigs_ht):
        diff = abs(eigs_h[i] - eigs_ht[j])
        if diff <= tol:
            matches.append((i, j, diff))
            i += 1
            j += 1
        elif eigs_h[i] < eigs_ht[j]:
            unmatched_h.append(i)
            i += 1
        else:
            unmatched_ht.append(j)
            j += 1
    unmatched_h.extend(range(i, len(eigs_h)))
    unmatched_ht.extend(range(j, len(eigs_ht)))
    return matches, unmatched_h, unmatched_ht


def default_order(dim: int) -> int:
    """Order-2 stencils in 1D (cheap to refine), order 4 in 3D."""
    return 2 if dim == 1 else 4


def pair_spectrum(pair: PartnerPair, box: BoxDomain, n: int, k: int,
                  match_tol: float, order: Optional[int] = None) -> SpectrumReport:
    """Eigensolve both partners, match levels, measure intertwining.

    The intertwining residual is recorded for every eigenvector of H
    (matched or not).  A vector is flagged as a zero mode of A either
    when its grid ratio ||A psi||/||psi|| is below 1e-6 or when the pair
    carries an exact symmetry certificate: then every isolated H-level
    is annihilated by A in the whole space, and the finite grid ratio it
    still shows is Dirichlet wall leakage, not a mappable image.  For
    the certificate path a couple of extra levels are solved so that
    isolation of the topmost reported level can be decided.
    """
    if box.dim != pair.dim:
        raise ConfigError(
            f"pair is {pair.dim}-dimensional but the box has {box.dim} axes")
    if order is None:
        order = default_order(box.dim)
    v, vt, a, forms = _pair_exprs(pair, box.frame)
    _check_margins(box, n, forms)
    certificate = _zero_mode_certificate(v, vt, a)
    grid_h = discretize(v, box, n, order)
    grid_ht = discretize(vt, box, n, order)
    dim = grid_h.matrix.shape[0]
    k_solve = min(k + 2, dim - 1) if certificate else k
    vals_h, vecs_h = lowest_eigs(grid_h, k_solve)
    vals_ht, _ = lowest_eigs(grid_ht, k)
    matches, unmatched_h, unmatched_ht = _greedy_match(
        list(vals_h[:k]), list(vals_ht), match_tol)
    a_matrix = operator_matrix(a, box, n, order)
    shape = (n,) * box.dim
    isolated = (_isolated_levels(list(vals_h), k) if certificate
                else [False] * k)
    intertwine = {}
    for i in range(k):
        result = _intertwine_vector(
            a_matrix, grid_ht.matrix, float(vals_h[i]), vecs_h[:, i],
            shape, order)
        if (certificate and not result.zero_mode and isolated[i]
                and result.ratio < _CERTIFIED_RATIO_GUARD):
            result = IntertwineResult(residual=0.0, ratio=result.ratio,
                                      zero_mode=True, certified=True)
        intertwine[i] = result
    return SpectrumReport(
        box=box, n=n, k=k, order=order, match_tol=match_tol,
        eigs_h=[float(v_) for v_ in vals_h[:k]],
        eigs_ht=[float(v_) for v_ in vals_ht],
        matches=matches, unmatched_h=unmatched_h, unmatched_ht=unmatched_ht,
        intertwine=intertwine)


def intertwine_numeric(pair: PartnerPair, eigenpair, box: BoxDomain, n: int,
                       order: Optional[int] = None) -> IntertwineResult:
    """Relative residual ||(Ht - E) A psi|| / ||A psi|| on the grid.

    eigenpair is (energy, vector) with the vector sampled on this box's
    grid; a vector annihilated by A (ratio below 1e-6) is flagged
    ZERO_MODE instead.  This standalone probe sees one vector only, so
    it applies just the ratio test; the symmetry-certified flagging
    needs neighbor levels and lives in pair_spectrum.
    """
    if order is None:
        order = default_order(box.dim)
    energy, psi = eigenpair
    v, vt, a, forms = _pair_exprs(pair, box.frame)
    _check_margins(box, n, forms)
    grid_ht = discretize(vt, box, n, order)
    a_matrix = operator_matrix(a, box, n, order)
    return _intertwine_vector(a_matrix, grid_ht.matrix, float(energy),
                              np.asarray(psi, dtype=float),
                              (n,) * box.dim, order)
