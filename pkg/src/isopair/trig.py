"""Finite trigonometric sums in one angle with rational-function coefficients.

A TrigPoly is sum_k a_k(rho, z) cos(k*theta) + b_k(rho, z) sin(k*theta) with
k >= 0 and RationalExpr coefficients in the cylindrical frame. Products fold
through the product-to-sum identities, so the algebra is closed and zero
testing stays exact.

The angle theta is tracked by a mode tag:

  * mode "phi": theta is the azimuthal angle itself,
  * mode ("xi", b_z): theta = phi - z/b_z, the invariant combination of a
    screw motion, so d/dz acts on harmonics with weight -1/b_z.

A purely radial sum (k = 0 only) carries mode None and combines with either.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Tuple, Union

from .errors import DomainError
from .polys import CYLINDRICAL_VARS, Poly, RationalExpr
from .scalars import ONE, ZERO, Scalar

MODE_PHI = "phi"

_HALF = Scalar(Fraction(1, 2))


def _merge_modes(m1, m2):
    if m1 is None:
        return m2
    if m2 is None or m1 == m2:
        return m1
    raise DomainError(f"incompatible angle modes: {m1} vs {m2}")


def _zero_re() -> RationalExpr:
    return RationalExpr.zero(CYLINDRICAL_VARS)


class TrigPoly:
    """Trigonometric polynomial in one angle over RationalExpr coefficients."""

    __slots__ = ("harm", "mode")

    def __init__(self, harm: Mapping[int, Tuple[RationalExpr, RationalExpr]] | None = None,
                 mode=None):
        clean = {}
        if harm:
            for k, (c, s) in harm.items():
                if k < 0:
                    raise ValueError("harmonic index must be nonnegative")
                if k == 0 and not s.is_zero():
                    raise ValueError("sin(0) coefficient must vanish")
                if c.is_zero() and s.is_zero():
                    continue
                clean[k] = (c, s)
        if not any(k > 0 for k in clean):
            mode = None
        elif mode is None:
            mode = MODE_PHI
        object.__setattr__(self, "harm", clean)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPoly is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def of(value) -> "TrigPoly":
        if isinstance(value, TrigPoly):
            return value
        if isinstance(value, RationalExpr):
            re = value
        elif isinstance(value, Poly):
            re = RationalExpr(value)
        else:
            re = RationalExpr.of(value, CYLINDRICAL_VARS)
        if re.vars != CYLINDRICAL_VARS:
            raise ValueError("TrigPoly coefficients use the cylindrical frame")
        if re.is_zero():
            return TrigPoly()
        return TrigPoly({0: (re, _zero_re())})

    @staticmethod
    def harmonic(k: int, kind: str, coeff=None, mode=MODE_PHI) -> "TrigPoly":
        """cos(k*theta) or sin(k*theta), optionally scaled."""
        re = RationalExpr.of(1, CYLINDRICAL_VARS) if coeff is None \
            else RationalExpr.of(coeff, CYLINDRICAL_VARS)
        if kind == "cos":
            pair = (re, _zero_re())
        elif kind == "sin":
            pair = (_zero_re(), re)
        else:
            raise ValueError("kind must be 'cos' or 'sin'")
        return TrigPoly({k: pair}, mode if k > 0 else None)

    @staticmethod
    def zero() -> "TrigPoly":
        return TrigPoly()

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.harm

    def is_radial(self) -> bool:
        """True when only the k = 0 harmonic is present."""
        return all(k == 0 for k in self.harm)

    def is_constant(self) -> bool:
        return self.is_radial() and self.radial_part().is_constant()

    def radial_part(self) -> RationalExpr:
        if 0 in self.harm:
            return self.harm[0][0]
        return _zero_re()

    def as_ratexpr(self) -> RationalExpr:
        if not self.is_radial():
            raise DomainError("trigonometric part present; not a plain rational expression")
        return self.radial_part()

    def max_harmonic(self) -> int:
        return max(self.harm) if self.harm else 0

    def retag(self, mode) -> "TrigPoly":
        """Reinterpret the angle (phi-mode or untagged sums only)."""
        if self.mode not in (None, MODE_PHI):
            raise DomainError("cannot retag a screw-angle sum")
        return TrigPoly(self.harm, mode if self.harm else None)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "TrigPoly | None":
        if isinstance(other, TrigPoly):
            return other
        if isinstance(other, (RationalExpr, Poly, int, Fraction, Scalar)):
            return TrigPoly.of(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        mode = _merge_modes(self.mode, other.mode)
        acc = {k: list(pair) for k, pair in self.harm.items()}
        for k, (c, s) in other.harm.items():
            if k in acc:
                acc[k][0] = acc[k][0] + c
                acc[k][1] = acc[k][1] + s
            else:
                acc[k] = [c, s]
        return TrigPoly({k: (c, s) for k, (c, s) in acc.items()}, mode)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TrigPoly({k: (-c, -s) for k, (c, s) in self.harm.items()}, self.mode)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        mode = _merge_modes(self.mode, other.mode)
        acc: dict = {}

        def put(k, dc, ds):
            if k < 0:
                k, dc, ds = -k, dc, -ds
            cur = acc.get(k)
            if cur is None:
                acc[k] = [dc, ds]
            else:
                cur[0] = cur[0] + dc
                cur[1] = cur[1] + ds

        for m, (a1, b1) in self.harm.items():
            for n, (a2, b2) in other.harm.items():
                if m == 0 and n == 0:
                    put(0, a1 * a2, _zero_re())
                    continue
                cc = a1 * a2 * _HALF
                ss = b1 * b2 * _HALF
                sc = b1 * a2 * _HALF
                cs = a1 * b2 * _HALF
                put(m - n, cc + ss, sc - cs)
                put(m + n, cc - ss, sc + cs)
        out = {}
        for k, (c, s) in acc.items():
            if k == 0:
                out[0] = (c, _zero_re())  # sin(0) contributions vanish
            else:
                out[k] = (c, s)
        return TrigPoly(out, mode)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.is_radial():
            raise DomainError("division by a trigonometric expression")
        inv = other.radial_part().inverse()
        return self * TrigPoly.of(inv)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = TrigPoly.of(RationalExpr.of(1, CYLINDRICAL_VARS))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus -------------------------------------------------------------

    def derive(self, axis: int) -> "TrigPoly":
        """Partial derivative along rho (0), phi (1) or z (2)."""
        if axis == 1:
            acc = {}
            for k, (c, s) in self.harm.items():
                if k == 0:
                    continue
                kk = Scalar(k)
                acc[k] = (s * kk, c * (-kk))
            return TrigPoly(acc, self.mode)
        acc = {}
        for k, (c, s) in self.harm.items():
            dc, ds = c.derive(axis), s.derive(axis)
            if axis == 2 and k > 0 and isinstance(self.mode, tuple):
                # theta = phi - z/b_z, so d/dz shifts harmonics by -k/b_z
                weight = Scalar(k) / self.mode[1]
                dc = dc - s * weight
                ds = ds + c * weight
            acc[k] = (dc, ds)
        return TrigPoly(acc, self.mode)

    # -- comparison / printing ------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        try:
            return (self - other).is_zero()
        except DomainError:
            return False

    __hash__ = None

    def __repr__(self):
        return f"TrigPoly({self})"

    def __str__(self):
        if not self.harm:
            return "0"
        angle = "xi" if isinstance(self.mode, tuple) else "phi"
        pieces = []
        for k in sorted(self.harm):
            c, s = self.harm[k]
            if k == 0:
                if not c.is_zero():
                    pieces.append(str(c))
                continue
            arg = angle if k == 1 else f"{k}*{angle}"
            for coeff, name in ((c, "cos"), (s, "sin")):
                if coeff.is_zero():
                    continue
                trig = f"{name}({arg})"
                if coeff == RationalExpr.one(CYLINDRICAL_VARS):
                    pieces.append(trig)
                else:
                    text = str(coeff)
                    if not text.startswith("(") and (" " in text or "-" in text
                                                     or "+" in text):
                        text = f"({text})"
                    pieces.append(f"{text}*{trig}")
        out = pieces[0]
        for piece in pieces[1:]:
            out += " + " + piece
        return out


TrigLike = Union[TrigPoly, RationalExpr, Poly, int, Fraction, Scalar]
