"""Coefficient fields: the rationals and prime fields.

Scalars over Q are plain Python ``int`` when integral and ``fractions.Fraction``
otherwise (``Fraction`` objects with denominator 1 are always collapsed back to
``int``).  Scalars over F_p are :class:`ModInt` residues.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import FieldMismatch, ParseError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModInt:
    """A canonical residue in [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, ModInt):
            if o.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModInt(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModInt(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModInt(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModInt(self.v * w, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModInt":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return ModInt(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return self * ModInt(w, self.p).inverse()

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return ModInt(w, self.p) * self.inverse()

    def __neg__(self):
        return ModInt(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModInt(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, ModInt):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return self.v == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModInt({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


Scalar = Union[int, Fraction, ModInt]


@dataclass(frozen=True)
class Field:
    """The coefficient field: ``Field()`` is Q, ``Field(p)`` is F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self) -> Scalar:
        return 0 if self.p is None else ModInt(0, self.p)

    @property
    def one(self) -> Scalar:
        return 1 if self.p is None else ModInt(1, self.p)

    def __call__(self, value) -> Scalar:
        """Coerce an int, Fraction, ModInt or decimal string into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.p is None:
            if isinstance(value, ModInt):
                raise FieldMismatch(f"cannot coerce an F_{value.p} residue into Q")
            if isinstance(value, Fraction):
                return value.numerator if value.denominator == 1 else value
            if isinstance(value, int):
                return value
            raise TypeError(f"cannot coerce {value!r} into Q")
        if isinstance(value, ModInt):
            if value.p != self.p:
                raise FieldMismatch(f"F_{value.p} vs F_{self.p}")
            return value
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator vanishes in F_{self.p}")
            return ModInt(value.numerator * pow(den, -1, self.p), self.p)
        if isinstance(value, int):
            return ModInt(value, self.p)
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def norm(self, c: Scalar) -> Scalar:
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        if not b:
            raise ZeroDivisionError("division by zero scalar")
        if self.p is None:
            q = Fraction(a) / b
            return q.numerator if q.denominator == 1 else q
        return a / b

    def inv(self, a: Scalar) -> Scalar:
        return self.div(self.one, a)

    def parse(self, text: str) -> Scalar:
        """Parse ``"6"``, ``"-3/2"`` style decimal strings."""
        s = text.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar literal {text!r}") from exc
        return self(value)

    def format(self, c: Scalar) -> str:
        return str(c)

    def contains(self, c) -> bool:
        if self.p is None:
            return isinstance(c, (int, Fraction)) and not isinstance(c, bool)
        return isinstance(c, ModInt) and c.p == self.p

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj) -> "Field":
        if obj == "Q":
            return QQ
        if isinstance(obj, dict) and set(obj) == {"Fp"}:
            return cls(int(obj["Fp"]))
        raise ParseError(f"bad field tag {obj!r}")

    @classmethod
    def from_flag(cls, flag: str) -> "Field":
        """CLI spelling: ``q``, ``f2`` or ``fp:P``."""
        f = flag.lower()
        if f == "q":
            return QQ
        if f.startswith("fp:"):
            return cls(int(f[3:]))
        if f.startswith("f") and f[1:].isdigit():
            return cls(int(f[1:]))
        raise ParseError(f"bad field flag {flag!r}")

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field()
GF2 = Field(2)
