"""Reduced rational functions over a polynomial ring.

Every :class:`RationalFunction` is stored as ``num/den`` with ``gcd(num, den)``
a unit and ``den`` normalized (primitive integral with positive graded-lex
leading coefficient over Q, monic over F_p), so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence, Union

from ..errors import FieldMismatch, ZeroDenominator
from .fields import ModInt, Scalar
from .gcd import poly_gcd
from .polynomial import PolyRing, Polynomial


def _unit_for(den: Polynomial) -> Scalar:
    """Scalar u such that ``den * u`` is normalized."""
    field = den.field
    if field.is_rational:
        cont = den.rational_content()
        if den.leading_coefficient() < 0:
            cont = -cont
        return field.norm(1 / cont)
    return field.inv(den.leading_coefficient())


class RationalFunction:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, reduce: bool = True):
        if den is None:
            den = num.ring.one()
        if num.ring != den.ring:
            raise FieldMismatch("numerator and denominator live in different rings")
        if not den:
            raise ZeroDenominator("rational function with zero denominator")
        if not num:
            den = num.ring.one()
        else:
            if reduce and not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            u = _unit_for(den)
            if u != 1:
                num = num.scale(u)
                den = den.scale(u)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, ring: PolyRing, c) -> "RationalFunction":
        return cls(ring.const(c))

    @classmethod
    def gen(cls, ring: PolyRing, i: int) -> "RationalFunction":
        return cls(ring.gen(i))

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # -- queries ------------------------------------------------------
    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def field(self):
        return self.num.ring.field

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Polynomial):
            return self.den.is_one() and self.num == other
        if isinstance(other, (int, Fraction, ModInt)):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def cross_equal(self, other: "RationalFunction") -> bool:
        """Equality by cross multiplication; independent of normalization."""
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise FieldMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise FieldMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, ModInt)) and not isinstance(other, bool):
            return RationalFunction(self.ring.const(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a:
            return other
        if not c:
            return self
        if b.is_one() and d.is_one():
            return RationalFunction._raw(a + c, b)
        if b == d:
            return RationalFunction(a + c, b)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RationalFunction(a * d + c * b, b * d, reduce=False)
        b1, d1 = b.exact_div(g), d.exact_div(g)
        num = a * d1 + c * b1
        den = b1 * d
        if not num:
            return RationalFunction(num)
        h = poly_gcd(num, g)
        if not h.is_constant():
            num, den = num.exact_div(h), den.exact_div(h)
        return RationalFunction(num, den, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a or not c:
            return RationalFunction(self.ring.zero())
        if b.is_one() and d.is_one():
            return RationalFunction._raw(a * c, b)
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_constant():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RationalFunction(a * c, b * d, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDenominator("inverse of the zero rational function")
        return RationalFunction(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDenominator("division by the zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction._raw(self.num ** e, self.den ** e)

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDenominator("denominator vanishes at the evaluation point")
        return self.field.div(self.num.evaluate(point), d)

    def substitute(
        self,
        assignment: Union[Mapping[int, "RationalFunction"], Sequence["RationalFunction"]],
        target: PolyRing | None = None,
    ) -> "RationalFunction":
        """Compose: replace variable i by ``assignment[i]``.

        A mapping may be partial (unassigned variables stay put, same ring);
        a sequence must cover every variable and may live in another ring.
        """
        if isinstance(assignment, Mapping):
            values = []
            for i in range(self.ring.nvars):
                v = assignment.get(i)
                values.append(RationalFunction.gen(self.ring, i) if v is None else _as_rf(v, self.ring))
            target = self.ring
        else:
            values = list(assignment)
            if len(values) != self.ring.nvars:
                raise ValueError("substitution must assign every variable")
            if target is None:
                if not values:
                    target = self.ring
                else:
                    target = _as_rf(values[0], None).ring
            values = [_as_rf(v, target) for v in values]
        if target.field != self.field:
            raise FieldMismatch("substitution changes the coefficient field")
        return compose(self.num, self.den, values, target)

    def diff(self, i: int) -> "RationalFunction":
        if not self.field.is_rational:
            raise FieldMismatch("derivatives are supported over Q only")
        n, d = self.num, self.den
        if d.is_one():
            return RationalFunction._raw(n.diff(i), d)
        return RationalFunction(n.diff(i) * d - n * d.diff(i), d * d)

    # -- printing -------------------------------------------------------
    def to_str(self) -> str:
        if self.den.is_one():
            return self.num.to_str()
        n = self.num.to_str()
        if len(self.num) > 1:
            n = f"({n})"
        d = self.den.to_str()
        if len(self.den) > 1 or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = to_str

    def __repr__(self):
        return f"RationalFunction({self.to_str()!r})"


def _as_rf(v, ring) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction(v)
    if ring is None:
        raise TypeError("cannot infer target ring from a scalar")
    return RationalFunction.const(ring, v)


def _homogenized_value(p: Polynomial, nums, cpoly: Polynomial, deg: int, target: PolyRing) -> Polynomial:
    """sum c * prod nums[i]^m_i * cpoly^(deg - |m|)  (p evaluated at nums/cpoly, times cpoly^deg)."""
    if cpoly.is_one():
        return p.compose(nums, target)
    hr = p.ring.extend(["__h"])
    h = {}
    for m, c in p.terms.items():
        h[m + (deg - sum(m),)] = c
    return Polynomial(hr, h).compose(list(nums) + [cpoly], target)


def compose(num: Polynomial, den: Polynomial, values: Sequence[RationalFunction], target: PolyRing) -> RationalFunction:
    """``num(values)/den(values)`` as a reduced rational function in ``target``.

    Values are brought over a common denominator C so that a polynomial P of
    degree e evaluates to  P~ / C^e  with P~ a polynomial.
    """
    used = num.variables() | den.variables()
    cpoly = target.one()
    for i in sorted(used):
        vd = values[i].den
        if not vd.is_one() and not vd == cpoly:
            g = poly_gcd(cpoly, vd)
            cpoly = cpoly * vd.exact_div(g)
    if cpoly.is_one():
        nums = [v.num for v in values]
        top = num.compose(nums, target)
        bottom = den.compose(nums, target)
    else:
        nums = []
        for i, v in enumerate(values):
            if i not in used:
                nums.append(target.zero())
            elif v.den == cpoly:
                nums.append(v.num)
            else:
                nums.append(v.num * cpoly.exact_div(v.den))
        dn, dd = num.degree(), den.degree()
        top = _homogenized_value(num, nums, cpoly, dn, target)
        bottom = _homogenized_value(den, nums, cpoly, dd, target)
        if dn > dd:
            bottom = bottom * cpoly ** (dn - dd)
        elif dd > dn:
            top = top * cpoly ** (dd - dn)
    if not bottom:
        raise ZeroDenominator("substituted denominator is the zero polynomial")
    if bottom.is_constant():
        return RationalFunction(top.scale(bottom.field.inv(bottom.constant_value())))
    return RationalFunction(top, bottom)


def as_rational(x, ring: PolyRing) -> RationalFunction:
    return _as_rf(x, ring)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Functional form of the four field operations (``add/sub/mul/div``)."""
    ops: Dict[str, object] = {
        "add": RationalFunction.__add__,
        "sub": RationalFunction.__sub__,
        "mul": RationalFunction.__mul__,
        "div": RationalFunction.__truediv__,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    if not isinstance(b, RationalFunction) or not isinstance(a, RationalFunction):
        raise TypeError("rf_arith expects two RationalFunction operands")
    if a.ring != b.ring:
        raise FieldMismatch(f"ring mismatch: {a.ring} vs {b.ring}")
    return ops[op](a, b)


def substitute(f: RationalFunction, assignment, target: PolyRing | None = None) -> RationalFunction:
    return f.substitute(assignment, target)


def partial_derivative(f: RationalFunction, var: int) -> RationalFunction:
    if not 0 <= var < f.ring.nvars:
        raise IndexError(f"variable index {var} out of range")
    return f.diff(var)
