"""Sparse multivariate polynomials and quotients over Q(sqrt2).

A Poly maps exponent triples to nonzero Scalar coefficients. The variable
names live on the instance so the same machinery serves the cartesian frame
(x1, x2, x3) and the cylindrical frame (rho, phi, z); in the cylindrical
frame the middle slot (the angle) always carries exponent zero, angular
dependence being handled by TrigPoly harmonics.

A RationalExpr is a num/den pair of Polys. There is no multivariate GCD:
equality is decided by cross-multiplication and normalization is limited to
cheap passes that keep the representation desk-scale (common monomial
factor, monic denominator, exact long division when one polynomial happens
to divide the other). Exact division covers the structured denominators
that arise from the constructions here (powers of a handful of affine
forms) without a general simplifier.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .errors import DomainError, PoleError
from .scalars import ONE, SQRT2, ZERO, Scalar, binomial

Exponents = Tuple[int, int, int]

CARTESIAN_VARS: Tuple[str, str, str] = ("x1", "x2", "x3")
CYLINDRICAL_VARS: Tuple[str, str, str] = ("rho", "phi", "z")

_ZERO_EXP: Exponents = (0, 0, 0)


class Poly:
    """Sparse polynomial in three ordered variables with Scalar coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[Exponents, Scalar] | None = None,
                 vars: Tuple[str, str, str] = CARTESIAN_VARS):
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = Scalar.of(coeff)
                if not coeff.is_zero():
                    clean[tuple(exps)] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "vars", tuple(vars))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors --------------------------------------------------

    @staticmethod
    def constant(value, vars=CARTESIAN_VARS) -> "Poly":
        return Poly({_ZERO_EXP: Scalar.of(value)}, vars)

    @staticmethod
    def zero(vars=CARTESIAN_VARS) -> "Poly":
        return Poly({}, vars)

    @staticmethod
    def one(vars=CARTESIAN_VARS) -> "Poly":
        return Poly.constant(1, vars)

    @staticmethod
    def variable(axis: int, vars=CARTESIAN_VARS) -> "Poly":
        exps = [0, 0, 0]
        exps[axis] = 1
        return Poly({tuple(exps): ONE}, vars)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(_ZERO_EXP, ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, axis: int) -> int:
        if not self.terms:
            return 0
        return max(e[axis] for e in self.terms)

    def leading_exponents(self) -> Exponents:
        """Lexicographically largest exponent triple."""
        return max(self.terms)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_exponents()]

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Poly.constant(other, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for exps, coeff in other.terms.items():
            cur = acc.get(exps)
            total = coeff if cur is None else cur + coeff
            if total.is_zero():
                acc.pop(exps, None)
            else:
                acc[exps] = total
        return Poly(acc, self.vars)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Poly.constant(other, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.vars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            s = Scalar.of(other)
            if s.is_zero():
                return Poly.zero(self.vars)
            return Poly({e: c * s for e, c in self.terms.items()}, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        acc: dict = {}
        for (e1, c1) in self.terms.items():
            for (e2, c2) in other.terms.items():
                exps = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                prod = c1 * c2
                cur = acc.get(exps)
                total = prod if cur is None else cur + prod
                if total.is_zero():
                    acc.pop(exps, None)
                else:
                    acc[exps] = total
        return Poly(acc, self.vars)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Poly exponent must be a nonnegative int")
        result = Poly.one(self.vars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus ------------------------------------------------------

    def derive(self, axis: int) -> "Poly":
        acc = {}
        for exps, coeff in self.terms.items():
            e = exps[axis]
            if e == 0:
                continue
            new = list(exps)
            new[axis] = e - 1
            acc[tuple(new)] = coeff * e
        return Poly(acc, self.vars)

    def antiderive(self, axis: int) -> "Poly":
        acc = {}
        for exps, coeff in self.terms.items():
            new = list(exps)
            new[axis] = exps[axis] + 1
            acc[tuple(new)] = coeff * Scalar(Fraction(1, exps[axis] + 1))
        return Poly(acc, self.vars)

    # -- substitution --------------------------------------------------

    def eval(self, point: Sequence) -> Scalar:
        values = [Scalar.of(v) if not isinstance(v, Scalar) else v for v in point]
        # per-axis power tables keep repeated exponents cheap
        tables = []
        for axis in range(3):
            top = self.degree_in(axis)
            row = [ONE]
            for _ in range(top):
                row.append(row[-1] * values[axis])
            tables.append(row)
        total = ZERO
        for exps, coeff in self.terms.items():
            term = coeff
            for axis in range(3):
                if exps[axis]:
                    term = term * tables[axis][exps[axis]]
            total = total + term
        return total

    def subst(self, replacements: Sequence["Poly"]) -> "Poly":
        """Substitute replacements[i] for variable i."""
        out_vars = replacements[0].vars
        # power tables of the replacement polynomials
        tables = []
        for axis in range(3):
            top = self.degree_in(axis)
            row = [Poly.one(out_vars)]
            for _ in range(top):
                row.append(row[-1] * replacements[axis])
            tables.append(row)
        total = Poly.zero(out_vars)
        for exps, coeff in self.terms.items():
            term = Poly.constant(coeff, out_vars)
            for axis in range(3):
                if exps[axis]:
                    term = term * tables[axis][exps[axis]]
            total = total + term
        return total

    def shift(self, offsets: Sequence) -> "Poly":
        """Translate variables: x_i -> x_i + offsets[i]."""
        reps = []
        for axis in range(3):
            off = Scalar.of(offsets[axis]) if not isinstance(offsets[axis], Scalar) \
                else offsets[axis]
            rep = Poly.variable(axis, self.vars)
            if not off.is_zero():
                rep = rep + Poly.constant(off, self.vars)
            reps.append(rep)
        return self.subst(reps)

    def rename_vars(self, vars: Tuple[str, str, str]) -> "Poly":
        return Poly(self.terms, vars)

    # -- exact division -------------------------------------------------

    def div_exact(self, divisor: "Poly") -> "Poly | None":
        """Return q with self == q * divisor, or None if no exact quotient.

        Plain lex long division; since coefficients form a field the division
        fails only when a remainder term is not reducible by the divisor's
        leading monomial.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly.zero(self.vars)
        if divisor.is_constant():
            inv = divisor.constant_value().inverse()
            return self * inv
        lead = divisor.leading_exponents()
        lead_coeff = divisor.terms[lead]
        rem = dict(self.terms)
        quo: dict = {}
        while rem:
            top = max(rem)
            delta = (top[0] - lead[0], top[1] - lead[1], top[2] - lead[2])
            if min(delta) < 0:
                return None
            factor = rem[top] / lead_coeff
            quo[delta] = factor
            for exps, coeff in divisor.terms.items():
                tgt = (exps[0] + delta[0], exps[1] + delta[1], exps[2] + delta[2])
                cur = rem.get(tgt, ZERO)
                total = cur - coeff * factor
                if total.is_zero():
                    rem.pop(tgt, None)
                else:
                    rem[tgt] = total
        return Poly(quo, self.vars)

    def monomial_content(self) -> Exponents:
        """Componentwise minimum exponent over all terms."""
        if not self.terms:
            return _ZERO_EXP
        mins = [None, None, None]
        for exps in self.terms:
            for axis in range(3):
                if mins[axis] is None or exps[axis] < mins[axis]:
                    mins[axis] = exps[axis]
        return tuple(mins)  # type: ignore[return-value]

    def divide_monomial(self, mono: Exponents) -> "Poly":
        if mono == _ZERO_EXP:
            return self
        return Poly({(e[0] - mono[0], e[1] - mono[1], e[2] - mono[2]): c
                     for e, c in self.terms.items()}, self.vars)

    # -- comparisons / printing -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Poly.constant(other, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self})"

    def sorted_terms(self):
        """Terms in descending lex order; the canonical print order."""
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.vars, exps) if e)
            pieces.append((coeff, mono))
        out = []
        for i, (coeff, mono) in enumerate(pieces):
            text, negative = _coeff_mono_text(coeff, mono)
            if i == 0:
                out.append("-" + text if negative else text)
            else:
                out.append(" - " + text if negative else " + " + text)
        return "".join(out)


def _coeff_mono_text(coeff: Scalar, mono: str) -> tuple[str, bool]:
    """Render one term; returns (text without sign, is_negative)."""
    sign = coeff.sign()
    mag = -coeff if sign < 0 else coeff
    if not mono:
        text = str(mag)
        if " " in text:  # mixed rational + sqrt2 part needs grouping
            text = f"({text})"
        return text, sign < 0
    if mag == ONE:
        return mono, sign < 0
    coeff_text = str(mag)
    if " " in coeff_text:
        coeff_text = f"({coeff_text})"
    return f"{coeff_text}*{mono}", sign < 0


PolyLike = Union[int, Fraction, Scalar, Poly, "RationalExpr"]


class RationalExpr:
    """Quotient of two Polys, normalized without a GCD pass."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.vars)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if num.is_zero():
            num, den = Poly.zero(num.vars), Poly.one(num.vars)
        else:
            # cancel the common monomial factor
            mn = num.monomial_content()
            md = den.monomial_content()
            common = tuple(min(a, b) for a, b in zip(mn, md))
            if common != _ZERO_EXP:
                num = num.divide_monomial(common)
                den = den.divide_monomial(common)
            if not den.is_constant():
                quo = num.div_exact(den)
                if quo is not None:
                    num, den = quo, Poly.one(num.vars)
                else:
                    quo = den.div_exact(num)
                    if quo is not None:
                        num, den = Poly.one(num.vars), quo
            # monic denominator in lex order fixes the scalar gauge
            lead = den.leading_coeff()
            if lead != ONE:
                inv = lead.inverse()
                num = num * inv
                den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalExpr is immutable")

    @property
    def vars(self):
        return self.num.vars

    # -- constructors ---------------------------------------------------

    @staticmethod
    def of(value: PolyLike, vars=CARTESIAN_VARS) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        if isinstance(value, Poly):
            return RationalExpr(value)
        return RationalExpr(Poly.constant(value, vars))

    @staticmethod
    def zero(vars=CARTESIAN_VARS) -> "RationalExpr":
        return RationalExpr(Poly.zero(vars))

    @staticmethod
    def one(vars=CARTESIAN_VARS) -> "RationalExpr":
        return RationalExpr(Poly.one(vars))

    @staticmethod
    def variable(axis: int, vars=CARTESIAN_VARS) -> "RationalExpr":
        return RationalExpr(Poly.variable(axis, vars))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        # normalization already folded den | num cases into den == 1
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Scalar:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def to_poly(self) -> Poly:
        if not self.is_polynomial():
            raise DomainError("expression is not a polynomial")
        return self.num * self.den.constant_value().inverse()

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RationalExpr | None":
        if isinstance(other, RationalExpr):
            return other
        if isinstance(other, Poly):
            return RationalExpr(other)
        if isinstance(other, (int, Fraction, Scalar)):
            return RationalExpr(Poly.constant(other, self.vars))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RationalExpr(a + c, b)
        quo = d.div_exact(b)
        if quo is not None:
            return RationalExpr(a * quo + c, d)
        quo = b.div_exact(d)
        if quo is not None:
            return RationalExpr(a + c * quo, b)
        return RationalExpr(a * d + c * b, b * d)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        # opportunistic cross-cancellation
        if not d.is_constant():
            quo = a.div_exact(d)
            if quo is not None:
                a, d = quo, Poly.one(a.vars)
        if not b.is_constant():
            quo = c.div_exact(b)
            if quo is not None:
                c, b = quo, Poly.one(a.vars)
        return RationalExpr(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        return RationalExpr(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalExpr(self.num ** exponent, self.den ** exponent)

    # -- calculus -----------------------------------------------------------

    def derive(self, axis: int) -> "RationalExpr":
        if self.den.is_constant():
            return RationalExpr(self.num.derive(axis), self.den)
        num = self.num.derive(axis) * self.den - self.num * self.den.derive(axis)
        return RationalExpr(num, self.den * self.den)

    # -- substitution ---------------------------------------------------------

    def eval(self, point: Sequence) -> Scalar:
        bottom = self.den.eval(point)
        if bottom.is_zero():
            raise PoleError(point)
        return self.num.eval(point) / bottom

    def shift(self, offsets: Sequence) -> "RationalExpr":
        return RationalExpr(self.num.shift(offsets), self.den.shift(offsets))

    def subst(self, replacements: Sequence[Poly]) -> "RationalExpr":
        return RationalExpr(self.num.subst(replacements), self.den.subst(replacements))

    def rename_vars(self, vars) -> "RationalExpr":
        return RationalExpr(self.num.rename_vars(vars), self.den.rename_vars(vars))

    # -- comparison / printing ---------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None  # cross-multiplied equality is not hash-compatible

    def __repr__(self):
        return f"RationalExpr({self})"

    def __str__(self):
        if self.den == Poly.one(self.vars):
            return str(self.num)
        num, den = str(self.num), str(self.den)
        return f"({num})/({den})"


def rotation45_polys(vars=CARTESIAN_VARS) -> list[Poly]:
    """Replacement polynomials for the 45-degree frame change in the
    (x1, x2) plane: x1 -> (x1 + x2)/sqrt2, x2 -> (x1 - x2)/sqrt2."""
    half_root = SQRT2 * Scalar(Fraction(1, 2))
    u = Poly.variable(0, vars)
    v = Poly.variable(1, vars)
    w = Poly.variable(2, vars)
    return [(u + v) * half_root, (u - v) * half_root, w]


def rotate45(expr: RationalExpr) -> RationalExpr:
    """Rewrite a cartesian expression in axes turned 45 degrees about x3."""
    return expr.subst(rotation45_polys(expr.vars))
