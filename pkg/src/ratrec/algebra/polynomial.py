"""Sparse multivariate polynomials over a :class:`~ratrec.algebra.fields.Field`.

A monomial is a tuple of exponents, one per ring variable.  A polynomial is a
dict from monomial to nonzero coefficient; zero coefficients are never stored.
Polynomials are treated as immutable once built.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from ..errors import FieldMismatch
from .fields import Field, ModInt, QQ, Scalar

Monomial = Tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x < y else y for x, y in zip(a, b))


def grlex_key(m: Monomial):
    return (sum(m), m)


class PolyRing:
    """A polynomial ring F[names]; carries variable names for printing and parsing."""

    __slots__ = ("field", "names", "nvars", "_zero_mono")

    def __init__(self, field: Field, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self._zero_mono = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.names)})"

    @property
    def one_mono(self) -> Monomial:
        return self._zero_mono

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self._zero_mono: c} if c else {})

    def gen(self, i: int) -> "Polynomial":
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def monomial(self, exps: Mapping[int, int] | Sequence[int], c=1) -> "Polynomial":
        if isinstance(exps, Mapping):
            m = [0] * self.nvars
            for i, e in exps.items():
                m[i] = e
            exps = m
        c = self.field(c)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def from_dict(self, terms: Mapping[Monomial, Scalar]) -> "Polynomial":
        f = self.field
        out = {}
        for m, c in terms.items():
            if len(m) != self.nvars:
                raise ValueError(f"monomial {m} has wrong arity for {self}")
            c = f(c)
            if c:
                out[tuple(m)] = c
        return Polynomial(self, out)

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(field, self.names)

    def extend(self, names: Sequence[str]) -> "PolyRing":
        return PolyRing(self.field, self.names + tuple(names))


def _add_into(d: Dict[Monomial, Scalar], m: Monomial, c: Scalar) -> None:
    v = d.get(m)
    if v is None:
        d[m] = c
        return
    v = v + c
    if type(v) is Fraction and v.denominator == 1:
        v = v.numerator
    if v:
        d[m] = v
    else:
        del d[m]


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, Scalar]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic queries -------------------------------------------------
    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.one_mono in self.terms)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(self.ring.one_mono) == 1

    def constant_value(self) -> Scalar:
        """Coefficient of the constant monomial."""
        return self.terms.get(self.ring.one_mono, self.field.zero)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        """Combined degree; the zero polynomial has degree 0 by convention."""
        return max((sum(m) for m in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=0)

    def variables(self) -> set:
        """Indices of variables that actually occur."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def __len__(self):
        return len(self.terms)

    def leading(self, key=grlex_key) -> Tuple[Monomial, Scalar]:
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def leading_coefficient(self, key=grlex_key) -> Scalar:
        return self.leading(key)[1]

    def sorted_terms(self, key=grlex_key):
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise FieldMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, ModInt)) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, ModInt)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        d = dict(big)
        for m, c in small.items():
            _add_into(d, m, c)
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(d, m, -c)
        return Polynomial(self.ring, d)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: Scalar) -> "Polynomial":
        c = self.field(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        norm = self.field.norm
        return Polynomial(self.ring, {m: norm(v * c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ModInt)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        d: Dict[Monomial, Scalar] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                _add_into(d, tuple(x + y for x, y in zip(ma, mb)), ca * cb)
        if self.field.is_rational:
            for m, c in d.items():
                if type(c) is Fraction and c.denominator == 1:
                    d[m] = c.numerator
        return Polynomial(self.ring, d)

    __rmul__ = __mul__

    def mul_term(self, mono: Monomial, c: Scalar) -> "Polynomial":
        norm = self.field.norm
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(m, mono)): norm(v * c) for m, v in self.terms.items()},
        )

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- division ------------------------------------------------------
    def divmod_exact(self, other: "Polynomial"):
        """Multivariate division under graded-lex; returns ``(q, r)``.

        ``r`` is zero exactly when ``other`` divides ``self``.
        """
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        lm, lc = other.leading()
        rest = [(m, c) for m, c in other.terms.items() if m != lm]
        p = dict(self.terms)
        q: Dict[Monomial, Scalar] = {}
        r: Dict[Monomial, Scalar] = {}
        while p:
            m = max(p, key=grlex_key)
            c = p.pop(m)
            if mono_divides(lm, m):
                t = mono_div(m, lm)
                qc = field.div(c, lc)
                q[t] = qc
                for mo, co in rest:
                    _add_into(p, mono_mul(mo, t), field.norm(-qc * co))
            else:
                r[m] = c
        return Polynomial(self.ring, q), Polynomial(self.ring, r)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod_exact(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def try_div(self, other: "Polynomial"):
        """``self / other`` if exact, else None.  Cheap degree checks first."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if not self:
            return self
        for i in range(self.nvars):
            if other.degree_in(i) > self.degree_in(i):
                return None
        q, r = self.divmod_exact(other)
        return None if r else q

    # -- evaluation and composition -------------------------------------------
    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        """Value at a point of scalars (over this polynomial's field)."""
        field = self.field
        if len(point) != self.nvars:
            raise ValueError("point has wrong arity")
        pt = [field(v) for v in point]
        total = field.zero
        cache: Dict[Tuple[int, int], Scalar] = {}
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = pt[i] ** e
                        cache[key] = pw
                    t = t * pw
            total = total + t
        return field.norm(total)

    def compose(self, values: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Substitute polynomial ``values[i]`` for variable i."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of substitution values")
        if target is None:
            target = values[0].ring if values else self.ring
        for v in values:
            if v.ring != target:
                raise FieldMismatch("substitution values must share a ring")
        if target.field != self.field:
            raise FieldMismatch("substitution changes the coefficient field")
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, e):
            key = (i, e)
            pw = cache.get(key)
            if pw is None:
                if e == 1:
                    pw = values[i]
                else:
                    half = power(i, e // 2)
                    pw = half * half
                    if e & 1:
                        pw = pw * values[i]
                cache[key] = pw
            return pw

        acc: Dict[Monomial, Scalar] = {}
        for m, c in self.terms.items():
            t = None
            for i, e in enumerate(m):
                if e:
                    pw = power(i, e)
                    t = pw if t is None else t * pw
            if t is None:
                _add_into(acc, target.one_mono, c)
            else:
                for tm, tc in t.terms.items():
                    _add_into(acc, tm, self.field.norm(tc * c))
        return Polynomial(target, acc)

    def diff(self, i: int) -> "Polynomial":
        d: Dict[Monomial, Scalar] = {}
        field = self.field
        for m, c in self.terms.items():
            e = m[i]
            if e:
                v = field.norm(c * e)
                if v:
                    nm = list(m)
                    nm[i] = e - 1
                    d[tuple(nm)] = v
        return Polynomial(self.ring, d)

    def rename(self, target: PolyRing, index_map: Sequence[int]) -> "Polynomial":
        """Move into ``target`` sending variable i to ``index_map[i]``."""
        out = {}
        for m, c in self.terms.items():
            nm = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    nm[index_map[i]] += e
            out[tuple(nm)] = c
        return Polynomial(target, out)

    # -- content / normalization --------------------------------------------
    def monic(self, key=grlex_key) -> "Polynomial":
        if not self:
            return self
        return self.scale(self.field.inv(self.leading_coefficient(key)))

    def rational_content(self) -> Fraction:
        """Over Q: c > 0 with self/c integral and primitive."""
        from math import gcd

        num = 0
        den = 1
        for c in self.terms.values():
            if type(c) is int:
                num = gcd(num, c)
            else:
                num = gcd(num, c.numerator)
                den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(1)

    def canonical(self) -> "Polynomial":
        """Unit-normalized associate: primitive integral with positive graded-lex
        leading coefficient over Q; monic over F_p.  Zero stays zero."""
        if not self:
            return self
        if self.field.is_rational:
            cont = self.rational_content()
            if self.leading_coefficient() < 0:
                cont = -cont
            if cont == 1:
                return self
            return self.scale(1 / cont)
        return self.monic()

    # -- printing --------------------------------------------------------
    def _mono_str(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.ring.names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def to_str(self) -> str:
        """Canonical string: terms in descending graded-lex order."""
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            ms = self._mono_str(m)
            cs = str(c)
            if not ms:
                term = cs
            elif cs == "1":
                term = ms
            elif cs == "-1":
                term = "-" + ms
            else:
                term = f"{cs}*{ms}"
            if not out:
                out.append(term)
            elif term.startswith("-"):
                out.append(" - " + term[1:])
            else:
                out.append(" + " + term)
        return "".join(out)

    __str__ = to_str

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def poly_ring(names: Iterable[str] | str, field: Field = QQ) -> Tuple[PolyRing, list]:
    """Convenience: ``R, (x, y) = poly_ring("x y")``."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    ring = PolyRing(field, list(names))
    return ring, ring.gens()
