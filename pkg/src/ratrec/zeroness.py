"""Zeroness and Skolem probes for the main sequence of a system."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Optional, Union

from .algebra.fields import QQ
from .algebra.polynomial import PolyRing
from .algebra.rational import RationalFunction
from .errors import DivisionByZeroEvent, FieldMismatch, InternalInconsistency
from .flatten import stabilization_bound
from .recsys import Numeric, RecSystem, SymbolicCustom, _Stepper, numeric


@dataclass(frozen=True)
class Zero:
    """Sound certificate: the state sequence cycled with only zeros seen."""

    explored: int

    def to_json(self) -> dict:
        return {"verdict": "zero", "bound": self.explored}


@dataclass(frozen=True)
class NonZero:
    n: int
    value: object

    def to_json(self) -> dict:
        return {"verdict": "nonzero", "n": self.n, "value": str(self.value)}


@dataclass(frozen=True)
class AllZeroUpTo:
    """The first ``bound`` entries vanish.  Not a certificate."""

    bound: int

    def to_json(self) -> dict:
        return {"verdict": "all_zero_up_to", "bound": self.bound}


@dataclass(frozen=True)
class DivisionByZero:
    step: int
    equation: int

    def to_json(self) -> dict:
        return {"verdict": "division_by_zero", "n": self.step, "equation": self.equation}


ZeronessVerdict = Union[Zero, NonZero, AllZeroUpTo, DivisionByZero]


def _start(sys: RecSystem, init) -> tuple:
    if not isinstance(init, Numeric):
        init = numeric(sys, init)
    if len(init.values) != sys.k:
        raise ValueError(f"expected {sys.k} initial values")
    f = sys.field
    return tuple(f.norm(f(v)) for v in init.values)


def zeroness_finite_field(sys: RecSystem, init, p: int | None = None) -> ZeronessVerdict:
    """Decide whether the main sequence is identically zero over F_p.

    The state space has p^k elements, so the trajectory revisits a state
    after at most p^k + 1 steps; from then on it repeats what was seen.
    """
    field = sys.field
    if field.is_rational:
        raise FieldMismatch("the finite-field procedure needs a prime field")
    if p is not None and p != field.characteristic:
        raise FieldMismatch(f"system is over F_{field.characteristic}, not F_{p}")
    cap = field.characteristic ** sys.k + 1
    state = _start(sys, init)
    stepper = _Stepper(sys, "numeric")
    seen = set()
    n = 0
    while True:
        key = tuple(int(v) for v in state)
        if key in seen:
            return Zero(n)
        seen.add(key)
        v = state[sys.main]
        if v:
            return NonZero(n, v)
        if n > cap:
            raise InternalInconsistency("state cycle longer than the state space")
        try:
            state = stepper.step(state, n)
        except DivisionByZeroEvent as exc:
            return DivisionByZero(exc.step, exc.equation)
        n += 1


def prefix_bound(sys: RecSystem) -> int:
    """p + 2 entries with p = k + k^3 ceil(log2(k D))."""
    D = sys.degree
    if D is None:
        raise ValueError("degree of the system is unknown; pass an explicit bound")
    return stabilization_bound(sys.k, max(D, 1)) + 2


def prefix_zero_check(sys: RecSystem, init, override_bound: int | None = None) -> ZeronessVerdict:
    """Heuristic check of the first p + 2 entries.

    A vanishing prefix does *not* prove the sequence is zero, so the answer is
    at best :class:`AllZeroUpTo`.
    """
    if not sys.field.is_rational:
        raise FieldMismatch("the prefix heuristic is stated over Q")
    count = override_bound if override_bound is not None else prefix_bound(sys)
    state = _start(sys, init)
    stepper = _Stepper(sys, "numeric")
    for n in range(count):
        v = state[sys.main]
        if v:
            return NonZero(n, v)
        if n + 1 < count:
            try:
                state = stepper.step(state, n)
            except DivisionByZeroEvent as exc:
                return DivisionByZero(exc.step, exc.equation)
    return AllZeroUpTo(count)


@dataclass(frozen=True)
class SkolemHit:
    n: int


def skolem_search(sys: RecSystem, init, bound: int) -> Optional[SkolemHit]:
    """Least n <= bound with u_n = 0.  Raises DivisionByZeroEvent on the way."""
    state = _start(sys, init)
    stepper = _Stepper(sys, "numeric")
    for n in range(bound + 1):
        if not state[sys.main]:
            return SkolemHit(n)
        if n < bound:
            state = stepper.step(state, n)
    return None


def falling_factorial(x: RationalFunction, d: int) -> RationalFunction:
    return prod((x - j for j in range(d)), start=RationalFunction.const(x.ring, 1))


def counterexample_system(d: int):
    """u' = P(v + 1), v' = v + 1 from (0, 0) with P(x) = x(x-1)...(x-d+1), so u_n = P(n)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    ring = PolyRing(QQ, ["u", "v"])
    v = RationalFunction.gen(ring, 1)
    sys = RecSystem(QQ, ("u", "v"), (falling_factorial(v + 1, d), v + 1))
    return sys, numeric(sys, [0, 0])


def counterexample_custom_init(d: int) -> SymbolicCustom:
    """u_0 = P(x), v_0 = x: the symbolic start that flattens at depth 1."""
    ring = PolyRing(QQ, ["x"])
    x = RationalFunction.gen(ring, 0)
    return SymbolicCustom((falling_factorial(x, d), x))


def shifted_counter_system(offset: int):
    """u_n = n - offset, via u' = u + 1 from u_0 = -offset."""
    sys = RecSystem.from_exprs(["u"], ["u + 1"])
    return sys, numeric(sys, [-offset])


__all__ = [
    "Zero",
    "NonZero",
    "AllZeroUpTo",
    "DivisionByZero",
    "ZeronessVerdict",
    "SkolemHit",
    "zeroness_finite_field",
    "prefix_bound",
    "prefix_zero_check",
    "skolem_search",
    "counterexample_system",
    "counterexample_custom_init",
    "shifted_counter_system",
]
