"""Shared test utilities.

Two things live here: deterministic random generators for exact scalars,
polynomials, and operators (seeded, so every run sees the same cases),
and an independent order-8 central finite-difference application of a
linear differential operator.  The reference runs entirely in exact
rational arithmetic: weights, step, and evaluation points are Fractions,
so for polynomial inputs of degree at most eight it reproduces the exact
derivative with no truncation and no roundoff, making it a genuinely
independent check on the symbolic operator algebra.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence, Tuple

from isopair.operators import LinOp
from isopair.polys import CARTESIAN_VARS, Poly, RationalExpr
from isopair.scalars import Scalar

Point = Tuple[Fraction, ...]

# order-8 central stencils on offsets -4..4, exact rational weights
D1_WEIGHTS = (
    Fraction(1, 280), Fraction(-4, 105), Fraction(1, 5), Fraction(-4, 5),
    Fraction(0), Fraction(4, 5), Fraction(-1, 5), Fraction(4, 105),
    Fraction(-1, 280),
)
D2_WEIGHTS = (
    Fraction(-1, 560), Fraction(8, 315), Fraction(-1, 5), Fraction(8, 5),
    Fraction(-205, 72), Fraction(8, 5), Fraction(-1, 5), Fraction(8, 315),
    Fraction(-1, 560),
)
_OFFSETS = tuple(range(-4, 5))


def make_rng(tag: int) -> random.Random:
    """Deterministic per-test RNG; the tag keeps streams independent."""
    return random.Random(0x150A11 + tag)


def rand_scalar(r: random.Random, *, allow_sqrt2: bool = True,
                nonzero: bool = False) -> Scalar:
    while True:
        a = Fraction(r.randint(-3, 3), r.choice((1, 2, 3)))
        b = Fraction(0)
        if allow_sqrt2 and r.random() < 0.4:
            b = Fraction(r.randint(-2, 2), r.choice((1, 2)))
        s = Scalar(a, b)
        if not (nonzero and s.is_zero()):
            return s


def rand_poly1(r: random.Random, max_deg: int) -> Poly:
    """Random nonconstant univariate polynomial (first axis), degree <= max_deg."""
    while True:
        terms = {}
        for d in range(max_deg + 1):
            if r.random() < 0.6:
                coeff = rand_scalar(r)
                if not coeff.is_zero():
                    terms[(d, 0, 0)] = coeff
        p = Poly(terms)
        if p.total_degree() >= 1:
            return p


def rand_poly3(r: random.Random, max_deg: int, max_terms: int = 6) -> Poly:
    """Random trivariate polynomial of total degree <= max_deg."""
    terms = {}
    for _ in range(r.randint(1, max_terms)):
        while True:
            expo = tuple(r.randint(0, max_deg) for _ in range(3))
            if sum(expo) <= max_deg:
                break
        coeff = rand_scalar(r, nonzero=True)
        terms[expo] = terms.get(expo, Scalar.of(0)) + coeff
    terms = {e: c for e, c in terms.items() if not c.is_zero()}
    if not terms:
        terms = {(0, 0, 0): Scalar.of(1)}
    return Poly(terms)


# multi-indices with at most two derivatives per axis and total order <= 2:
# the shapes that actually occur in the constructions under test
INDEX_MENU = (
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (2, 0, 0), (0, 2, 0), (0, 0, 2),
    (1, 1, 0), (1, 0, 1), (0, 1, 1),
)


def rand_linop(r: random.Random, max_coeff_deg: int = 3) -> LinOp:
    """Random cartesian operator with polynomial coefficients."""
    indices = r.sample(INDEX_MENU, r.randint(2, 5))
    op = LinOp.zero()
    for alpha in indices:
        coeff = RationalExpr(rand_poly3(r, max_coeff_deg, max_terms=4))
        term = LinOp.mul_by(coeff)
        for axis, count in enumerate(alpha):
            for _ in range(count):
                term = term @ LinOp.partial(axis)
        op = op + term
    return op


def poly_fn(p: Poly) -> Callable[[Point], Scalar]:
    return lambda point: p.eval(point)


def fd_partial(f: Callable[[Point], Scalar], point: Point, axis: int,
               order: int, h: Fraction) -> Scalar:
    """Order-8 central estimate of the pure derivative along one axis."""
    if order == 0:
        return f(point)
    if order == 1:
        weights = D1_WEIGHTS
    elif order == 2:
        weights = D2_WEIGHTS
    else:
        raise ValueError("reference stencils cover derivative orders 0..2")
    total = Scalar.of(0)
    for off, weight in zip(_OFFSETS, weights):
        if weight == 0:
            continue
        shifted = list(point)
        shifted[axis] += off * h
        total = total + f(tuple(shifted)) * Scalar(weight)
    return total * Scalar(Fraction(1) / h ** order)


def fd_apply_index(f: Callable[[Point], Scalar], point: Point,
                   alpha: Sequence[int], h: Fraction) -> Scalar:
    """Mixed partial d^alpha f by nesting the one-axis stencils."""
    for axis, count in enumerate(alpha):
        if count:
            rest = list(alpha)
            rest[axis] = 0

            def inner(q: Point, _rest=tuple(rest)) -> Scalar:
                return fd_apply_index(f, q, _rest, h)

            return fd_partial(inner, point, axis, count, h)
    return f(point)


def fd_apply(op: LinOp, f: Callable[[Point], Scalar], point: Point,
             h: Fraction) -> Scalar:
    """Apply a LinOp to a function by exact-rational finite differences."""
    total = Scalar.of(0)
    for alpha, coeff in op.terms.items():
        total = total + coeff.eval(point) * fd_apply_index(f, point, alpha, h)
    return total


def rand_point(r: random.Random, denom: int = 8, span: int = 16) -> Point:
    return tuple(Fraction(r.randint(-span, span), denom) for _ in range(3))
