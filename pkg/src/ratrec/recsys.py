"""Mutually recursive systems of width k, their evaluation and simple recursions.

A :class:`RecSystem` holds one update per sequence.  An update is either a
:class:`~ratrec.algebra.RationalFunction` over the sequence names or a
:class:`~ratrec.circuits.Circuit` whose inputs are labelled by sequence names.
In an *extended* system, equation i may also read the freshly computed values
of equations 0..i-1, written ``next_<name>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra.fields import Field, QQ, Scalar
from .algebra.parse import parse_expr
from .algebra.polynomial import PolyRing, Polynomial
from .algebra.rational import RationalFunction, compose
from .circuits import Circuit, circuit_to_polynomial, evaluate_gates, fuse_extended
from .errors import DivisionByZeroEvent, FieldMismatch, ResourceLimit, ZeroDenominator

Update = Union[RationalFunction, Circuit]

NEXT_PREFIX = "next_"
DEGREE_TERM_BUDGET = 5000


def next_name(name: str) -> str:
    return NEXT_PREFIX + name


@dataclass(frozen=True)
class RecSystem:
    field: Field
    names: Tuple[str, ...]
    updates: Tuple[Update, ...]
    extended: bool = False
    main: int = 0

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "updates", tuple(self.updates))
        k = len(self.names)
        if k == 0:
            raise ValueError("a system needs at least one sequence")
        if len(self.updates) != k:
            raise ValueError(f"{k} sequences but {len(self.updates)} updates")
        if not 0 <= self.main < k:
            raise ValueError("main index out of range")
        ring = self.update_ring
        allowed_x = set(self.names)
        for i, u in enumerate(self.updates):
            allowed = allowed_x | {next_name(n) for n in self.names[:i]} if self.extended else allowed_x
            if isinstance(u, RationalFunction):
                if u.ring != ring:
                    raise FieldMismatch(f"update {i} is not over {ring}")
                used = {ring.names[j] for j in u.variables()}
            elif isinstance(u, Circuit):
                if u.field != self.field:
                    raise FieldMismatch(f"update {i} circuit is over {u.field}")
                used = set(u.labels)
            else:
                raise TypeError(f"update {i} is neither a rational function nor a circuit")
            bad = used - allowed
            if bad:
                raise ValueError(f"update {i} ({self.names[i]}) reads disallowed inputs {sorted(bad)}")

    # -- construction -------------------------------------------------
    @classmethod
    def from_exprs(
        cls,
        names: Sequence[str],
        exprs: Sequence[str],
        field: Field = QQ,
        *,
        extended: bool = False,
        main: int = 0,
    ) -> "RecSystem":
        names = tuple(names)
        ring = make_update_ring(field, names, extended)
        return cls(field, names, tuple(parse_expr(e, ring) for e in exprs), extended, main)

    # -- derived data ---------------------------------------------------
    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def update_ring(self) -> PolyRing:
        return make_update_ring(self.field, self.names, self.extended)

    @property
    def is_polynomial(self) -> bool:
        return all(isinstance(u, Circuit) or u.is_polynomial() for u in self.updates)

    @property
    def degree(self) -> Optional[int]:
        """D: the maximum update degree, or None when a circuit is too big to expand."""
        ds = []
        for u in self.updates:
            if isinstance(u, RationalFunction):
                ds.append(u.degree())
            else:
                try:
                    ds.append(circuit_to_polynomial(u, DEGREE_TERM_BUDGET).degree())
                except ResourceLimit:
                    return None
        return max(ds)

    def fused(self) -> "RecSystem":
        """Equivalent standard system (identity on standard systems)."""
        if not self.extended:
            return self
        circuits = [to_circuit(u, self.update_ring) for u in self.updates]
        joint = fuse_extended(circuits, list(self.names), [next_name(n) for n in self.names])
        ups = tuple(Circuit(self.field, joint.gates, (o,)) for o in joint.outputs)
        return RecSystem(self.field, self.names, ups, False, self.main)


def make_update_ring(field: Field, names: Sequence[str], extended: bool) -> PolyRing:
    names = tuple(names)
    if extended:
        names = names + tuple(next_name(n) for n in names)
    return PolyRing(field, names)


def to_circuit(u: Update, ring: PolyRing) -> Circuit:
    if isinstance(u, Circuit):
        return u
    if not u.is_polynomial():
        raise ValueError("only polynomial updates can be turned into circuits")
    from .circuits import polynomial_to_circuit

    return polynomial_to_circuit(u.num)


# -- initial conditions -----------------------------------------------------

@dataclass(frozen=True)
class Numeric:
    values: Tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class Symbolic:
    """F_0^(i) = x_i for every i (characteristic 0 only)."""


@dataclass(frozen=True)
class SymbolicCustom:
    values: Tuple[RationalFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        rings = {v.ring for v in self.values}
        if len(rings) > 1:
            raise FieldMismatch("custom initial values must share a ring")

    @property
    def ring(self) -> PolyRing:
        return self.values[0].ring


InitialCondition = Union[Numeric, Symbolic, SymbolicCustom]


def numeric(sys: RecSystem, values: Sequence) -> Numeric:
    return Numeric(tuple(sys.field(v) for v in values))


# -- stepping ------------------------------------------------------------------

GUARD_FACTOR = 8


def _expansion_estimate(u: RationalFunction, point) -> int:
    """Upper bound on the term count of u(point) before cancellation."""
    used = u.variables()
    dens = 1
    for i in used:
        if not point[i].den.is_one():
            dens *= len(point[i].den)
    sizes = [len(v.num) for v in point]
    total = 0
    for poly in (u.num, u.den):
        deg = poly.degree()
        for m in poly.terms:
            t = dens ** (deg - sum(m)) if dens > 1 else 1
            for i, e in enumerate(m):
                if e:
                    t *= (sizes[i] * dens) ** e
            total += t
    return total




class _Stepper:
    """Compiled one-step map for a system over a value domain.

    ``mode`` is "numeric" (field scalars) or "symbolic" (rational functions in
    ``target``).
    """

    def __init__(self, sys: RecSystem, mode: str, target: PolyRing | None = None, size_guard: int | None = None):
        self.sys = sys
        self.mode = mode
        self.target = target
        self.size_guard = size_guard
        if mode == "symbolic":
            one = RationalFunction.const(target, 1)
            self.lift = lambda c: one if c == 1 else RationalFunction.const(target, c)
        else:
            self.lift = None

    def _rf_value(self, u: RationalFunction, point):
        if self.mode == "numeric":
            d = u.den.evaluate(point) if not u.den.is_one() else 1
            if not d:
                raise ZeroDenominator("zero denominator")
            n = u.num.evaluate(point)
            return n if d == 1 else self.sys.field.div(n, d)
        if self.size_guard is not None and _expansion_estimate(u, point) > self.size_guard:
            raise ResourceLimit(f"composition would expand past {self.size_guard} terms")
        return compose(u.num, u.den, point, self.target)

    def step(self, state: Sequence, n: int) -> tuple:
        sys = self.sys
        k = sys.k
        names = sys.names
        if not sys.extended:
            shared: Dict[int, List] = {}
            inputs = dict(zip(names, state))
            out = []
            for i, u in enumerate(sys.updates):
                try:
                    if isinstance(u, RationalFunction):
                        out.append(self._rf_value(u, list(state)))
                    else:
                        key = id(u.gates)
                        if key not in shared:
                            joint = Circuit(u.field, u.gates, tuple(range(len(u.gates))))
                            shared[key] = evaluate_gates(joint, inputs, self.lift)
                        out.append(shared[key][u.outputs[0]])
                except ZeroDenominator:
                    raise DivisionByZeroEvent(n, i, names[i]) from None
            return self._norm(out)
        new: List = []
        zero = self._zero()
        for i, u in enumerate(sys.updates):
            try:
                if isinstance(u, RationalFunction):
                    point = list(state) + new + [zero] * (k - len(new))
                    new.append(self._rf_value(u, point))
                else:
                    inputs = dict(zip(names, state))
                    inputs.update({next_name(nm): v for nm, v in zip(names, new)})
                    (v,) = evaluate_gates(u, inputs, self.lift)
                    new.append(v)
            except ZeroDenominator:
                raise DivisionByZeroEvent(n, i, names[i]) from None
        return self._norm(new)

    def _zero(self):
        if self.mode == "numeric":
            return self.sys.field.zero
        return RationalFunction.const(self.target, 0)

    def _norm(self, values):
        if self.mode == "numeric":
            norm = self.sys.field.norm
            return tuple(norm(v) for v in values)
        return tuple(values)


def evaluate(sys: RecSystem, init: Numeric | Sequence, steps: int) -> List[tuple]:
    """Rows 0..steps of the joint trajectory (exact)."""
    if not isinstance(init, Numeric):
        if isinstance(init, (Symbolic, SymbolicCustom)):
            raise TypeError("evaluate needs a numeric initial condition")
        init = numeric(sys, init)
    if len(init.values) != sys.k:
        raise ValueError(f"initial condition has {len(init.values)} values, expected {sys.k}")
    state = tuple(sys.field.norm(sys.field(v)) for v in init.values)
    stepper = _Stepper(sys, "numeric")
    rows = [state]
    for n in range(steps):
        state = stepper.step(state, n)
        rows.append(state)
    return rows


def main_column(rows: Sequence[tuple], sys: RecSystem) -> list:
    return [r[sys.main] for r in rows]


# -- symbolic evaluation -------------------------------------------------------

@dataclass(frozen=True)
class SymbolicTrace:
    ring: PolyRing
    rows: Tuple[Tuple[RationalFunction, ...], ...] = dc_field(default=())

    def column(self, i: int) -> List[RationalFunction]:
        return [r[i] for r in self.rows]

    def __len__(self):
        return len(self.rows)


def symbolic_ring(k: int, field: Field = QQ) -> PolyRing:
    return PolyRing(field, [f"x{i + 1}" for i in range(k)])


def initial_row(sys: RecSystem, init: Symbolic | SymbolicCustom) -> Tuple[PolyRing, tuple]:
    if isinstance(init, Symbolic):
        if not sys.field.is_rational:
            raise FieldMismatch("symbolic initial conditions require the field Q")
        ring = symbolic_ring(sys.k, sys.field)
        return ring, tuple(RationalFunction.gen(ring, i) for i in range(sys.k))
    if isinstance(init, SymbolicCustom):
        if len(init.values) != sys.k:
            raise ValueError(f"custom initial condition has {len(init.values)} values, expected {sys.k}")
        if init.ring.field != sys.field:
            raise FieldMismatch("custom initial values are over another field")
        return init.ring, init.values
    raise TypeError("expected a Symbolic or SymbolicCustom initial condition")


def symbolic_evaluate(
    sys: RecSystem,
    init: Symbolic | SymbolicCustom | None = None,
    steps: int = 0,
    *,
    max_terms: int | None = None,
) -> SymbolicTrace:
    """Exact trace F_0..F_steps of rational functions.

    ``max_terms`` caps the size (numerator plus denominator terms) of every
    entry; exceeding it raises :class:`ResourceLimit`.  With a cap set, a
    composition whose a-priori expansion bound exceeds ``GUARD_FACTOR`` times
    the cap is refused before it is attempted.
    """
    if init is None:
        init = Symbolic()
    ring, row = initial_row(sys, init)
    guard = None if max_terms is None else GUARD_FACTOR * max_terms
    stepper = _Stepper(sys, "symbolic", ring, guard)
    rows = [row]
    for n in range(steps):
        row = stepper.step(row, n)
        if max_terms is not None:
            for f in row:
                if len(f.num) + len(f.den) > max_terms:
                    raise ResourceLimit(f"trace entry at step {n + 1} exceeds {max_terms} terms")
        rows.append(row)
    return SymbolicTrace(ring, tuple(rows))


def extend_trace(sys: RecSystem, trace: SymbolicTrace, steps: int) -> SymbolicTrace:
    """Append ``steps`` more rows to ``trace``."""
    stepper = _Stepper(sys, "symbolic", trace.ring)
    rows = list(trace.rows)
    row = rows[-1]
    for n in range(len(rows) - 1, len(rows) - 1 + steps):
        row = stepper.step(row, n)
        rows.append(row)
    return SymbolicTrace(trace.ring, tuple(rows))


def apply_step_homomorphism(sys: RecSystem, f: RationalFunction) -> RationalFunction:
    """h(f): replace each x_i in f by F_1^(i) (one step from F_0^(i) = x_i).

    ``f`` lives in a ring with exactly k variables standing for x_1..x_k.
    """
    if f.ring.nvars != sys.k:
        raise ValueError(f"expected a function of {sys.k} variables")
    gens = tuple(RationalFunction.gen(f.ring, i) for i in range(sys.k))
    row1 = _Stepper(sys, "symbolic", f.ring).step(gens, 0)
    return f.substitute(list(row1), f.ring)


# -- degree profile -----------------------------------------------------------------

@dataclass(frozen=True)
class DegreeRow:
    n: int
    d_n: int
    bound: Optional[int]
    ok: Optional[bool]


def degree_profile(trace: SymbolicTrace, k: int, D: Optional[int]) -> List[DegreeRow]:
    """Max degree of each trace row against the (k*D)^n growth bound."""
    out = []
    for n, row in enumerate(trace.rows):
        d = max(f.degree() for f in row)
        if D is None:
            out.append(DegreeRow(n, d, None, None))
        else:
            bound = (k * D) ** n
            out.append(DegreeRow(n, d, bound, d <= bound))
    return out


# -- P-recursive sequences -----------------------------------------------------

@dataclass(frozen=True)
class PRecurrence:
    """P_0(n) a_n + ... + P_d(n) a_{n+d} = 0 with initial values a_0.. ."""

    coeffs: Tuple[Polynomial, ...]
    initial: Tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "initial", tuple(QQ(v) for v in self.initial))
        if not self.coeffs:
            raise ValueError("a P-recurrence needs at least one coefficient")
        if not self.coeffs[-1]:
            raise ValueError("leading coefficient P_d is identically zero")
        if len(self.initial) not in (self.d, self.d + 1) or (self.d == 0 and not self.initial):
            raise ValueError(f"need {self.d} or {self.d + 1} initial values")
        if len(self.initial) == self.d + 1:
            lhs = sum(P.evaluate([0]) * a for P, a in zip(self.coeffs, self.initial))
            if lhs:
                raise ValueError("initial values violate the recurrence at n = 0")

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_exprs(cls, coeffs: Sequence[str], initial: Sequence) -> "PRecurrence":
        ring = PolyRing(QQ, ["n"])
        polys = []
        for c in coeffs:
            f = parse_expr(c, ring)
            if not f.is_polynomial():
                raise ValueError(f"coefficient {c!r} is not a polynomial in n")
            polys.append(f.num)
        return cls(tuple(polys), tuple(QQ(v) if not isinstance(v, str) else QQ.parse(v) for v in initial))


def from_precursive(rec: PRecurrence) -> Tuple[RecSystem, Numeric]:
    """Ratrec system of dimension d+2 with u^(0)_n = a_n, ..., u^(d)_n = a_{n+d}, v_n = n.

    u^(d)_{n+1} = a_{n+d+1} is obtained from the recurrence at index n+1, so the
    coefficients are evaluated at v_n + 1.
    """
    d = rec.d
    names = tuple(f"u{j}" for j in range(d + 1)) + ("v",)
    ring = PolyRing(QQ, names)
    v = ring.gen(d + 1)
    shifted = [P.compose([v + 1], ring) for P in rec.coeffs]
    updates: List[RationalFunction] = []
    for j in range(d):
        updates.append(RationalFunction.gen(ring, j + 1))
    top = RationalFunction(ring.zero())
    for j in range(d):
        top = top - RationalFunction(shifted[j] * ring.gen(j + 1), shifted[d])
    updates.append(top)
    updates.append(RationalFunction(v + 1))
    init = list(rec.initial)
    if len(init) == d:
        pd0 = rec.coeffs[d].evaluate([0])
        if not pd0:
            raise DivisionByZeroEvent(0, d, names[d])
        acc = sum(rec.coeffs[j].evaluate([0]) * init[j] for j in range(d))
        init.append(QQ.div(-acc, pd0))
    init.append(0)
    return RecSystem(QQ, names, tuple(updates), False, 0), Numeric(tuple(init))


# -- simple recursions ------------------------------------------------------------

@dataclass(frozen=True)
class SimpleRecursion:
    """u_{n+m+1} = R(u_n, ..., u_{n+m}) with initial values u_0..u_m."""

    R: RationalFunction
    initial: Tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple(self.initial))
        if len(self.initial) != self.R.ring.nvars:
            raise ValueError(f"need {self.R.ring.nvars} initial values")

    @property
    def m(self) -> int:
        return self.R.ring.nvars - 1

    @classmethod
    def from_expr(cls, expr: str, m: int, initial: Sequence, field: Field = QQ) -> "SimpleRecursion":
        ring = PolyRing(field, [f"y{i}" for i in range(m + 1)])
        return cls(parse_expr(expr, ring), tuple(field(v) for v in initial))


def simple_evaluate(sr: SimpleRecursion, steps: int) -> list:
    """u_0..u_steps.  A vanishing denominator raises DivisionByZeroEvent whose
    ``step`` is the last index read (u_{step+1} could not be computed)."""
    field = sr.R.field
    vals = [field.norm(field(v)) for v in sr.initial][: steps + 1]
    m = sr.m
    while len(vals) <= steps:
        window = vals[-(m + 1):]
        try:
            vals.append(sr.R.evaluate(window))
        except ZeroDenominator:
            raise DivisionByZeroEvent(len(vals) - 1, 0) from None
    return vals


def factorial_system() -> Tuple[RecSystem, Numeric]:
    """b' = b + 1, c' = c (b + 1) with b_0 = 0, c_0 = 1; main sequence c."""
    sys = RecSystem.from_exprs(["b", "c"], ["b+1", "c*(b+1)"], main=1)
    return sys, numeric(sys, [0, 1])


def catalan_system() -> Tuple[RecSystem, Numeric]:
    sys = RecSystem.from_exprs(["u", "v"], ["2*(2*v+1)/(v+2)*u", "v+1"])
    return sys, numeric(sys, [1, 0])


def factorial_simple() -> SimpleRecursion:
    """c_{n+2} = c_{n+1}^2 / c_n + c_{n+1}, c_0 = c_1 = 1."""
    return SimpleRecursion.from_expr("y1^2/y0 + y1", 1, [1, 1])


def squares_chain_system() -> RecSystem:
    """u1' = u1^2 + u2^2, u2' = u1 + u2: trdeg saturates before the fields do."""
    return RecSystem.from_exprs(["u1", "u2"], ["u1^2 + u2^2", "u1 + u2"])
