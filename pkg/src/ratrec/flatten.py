"""Field chains of a symbolic trace and extraction of a simple recursion.

For the main column F_0, F_1, ... of a symbolic trace we look for the least m
such that F_{m+1} lies in Q(F_0, ..., F_m).  The witness R then gives
F_{n+m+1} = R(F_n, ..., F_{n+m}) for every n.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .algebra.fields import QQ
from .algebra.groebner import buchberger
from .algebra.orders import BlockOrder, GradedRevLex
from .algebra.polynomial import PolyRing, Polynomial
from .algebra.rational import RationalFunction
from .errors import BoundExceeded, FieldMismatch, InternalInconsistency, ZeroDenominator
from .recsys import (
    RecSystem,
    Symbolic,
    SymbolicCustom,
    SymbolicTrace,
    extend_trace,
    symbolic_evaluate,
)

DEFAULT_DEPTH_LIMIT = 12


# -- transcendence degree -----------------------------------------------------

def _rank_numeric(rows: List[List]) -> int:
    """Rank over Q of a small Fraction matrix (Gaussian elimination)."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                q = QQ.div(rows[r][col], p)
                rows[r] = [QQ.norm(a - q * b) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _rank_bareiss(rows: List[List[Polynomial]]) -> int:
    """Exact rank of a polynomial matrix by fraction-free elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ring = rows[0][0].ring
    prev = ring.one()
    rank = 0
    for col in range(len(rows[0])):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            for j in range(col + 1, len(rows[0])):
                rows[r][j] = (p * rows[r][j] - a * rows[rank][j]).exact_div(prev)
            rows[r][col] = ring.zero()
        prev = p
        rank += 1
    return rank


def jacobian(gens: Sequence[RationalFunction]) -> List[List[RationalFunction]]:
    if not gens:
        return []
    n = gens[0].ring.nvars
    return [[g.diff(j) for j in range(n)] for g in gens]


def transcendence_degree(
    gens: Sequence[RationalFunction],
    *,
    seed: int | None = 0,
    trials: int = 2,
) -> int:
    """trdeg of Q(gens) over Q: the rank of the Jacobian over Q(x).

    A rank at a random integer point is a lower bound; when it already equals
    the largest possible value it is returned, otherwise the exact
    fraction-free rank decides.
    """
    gens = list(gens)
    if not gens:
        return 0
    ring = gens[0].ring
    if not ring.field.is_rational:
        raise FieldMismatch("transcendence degrees are computed over Q only")
    for g in gens:
        if g.ring != ring:
            raise FieldMismatch("generators from different rings")
    J = jacobian(gens)
    full = min(len(gens), ring.nvars)
    if full == 0:
        return 0
    rng = random.Random(seed)
    for _ in range(trials):
        pt = [rng.randint(1, 10 ** 6) for _ in range(ring.nvars)]
        try:
            mat = [[e.evaluate(pt) for e in row] for row in J]
        except ZeroDenominator:
            continue
        if _rank_numeric(mat) == full:
            return full
    prows = []
    for row in J:
        den = ring.one()
        for e in row:
            den = _lcm(den, e.den)
        prows.append([e.num * den.exact_div(e.den) for e in row])
    return _rank_bareiss(prows)


def _lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    from .algebra.gcd import poly_lcm

    if b.is_one():
        return a
    if a.is_one():
        return b
    return poly_lcm(a, b)


# -- subfield membership ------------------------------------------------------

def subfield_membership(
    f: RationalFunction,
    gens: Sequence[RationalFunction],
    tag_names: Sequence[str] | None = None,
    *,
    cancel=None,
    max_pairs: int | None = None,
) -> Optional[RationalFunction]:
    """R with f = R(gens) if f lies in Q(gens), else None.

    Tag variables y_i stand for the generators.  In the ideal generated by
    y_i den(g_i) - num(g_i), z den(f) - num(f) and w*Delta - 1, eliminating
    the x's and w under the block order {x, w} >> {z} >> {y} leaves a reduced
    basis which contains some B(y) z - A(y) with B(gens) != 0 exactly when f
    is a member.
    """
    gens = list(gens)
    ring = f.ring
    if not ring.field.is_rational:
        raise FieldMismatch("subfield membership is implemented over Q only")
    m = len(gens)
    if tag_names is None:
        tag_names = [f"y{i + 1}" for i in range(m)]
    tag_names = list(tag_names)
    if len(tag_names) != m:
        raise ValueError("one tag name per generator is needed")
    tag_ring = PolyRing(QQ, tag_names)
    if f.is_constant():
        return RationalFunction.const(tag_ring, f.num.constant_value())
    for i, g in enumerate(gens):
        if g == f:
            return RationalFunction.gen(tag_ring, i)
    if transcendence_degree(gens + [f]) > transcendence_degree(gens):
        return None

    nx = ring.nvars
    delta = f.den
    for g in gens:
        delta = delta * g.den
    use_w = not delta.is_constant()
    extra = (["__w"] if use_w else []) + ["__z"] + [f"__y{i}" for i in range(m)]
    big = ring.extend(extra)
    lift = lambda p: p.compose([big.gen(i) for i in range(nx)], big)
    zi = nx + (1 if use_w else 0)
    yi = [zi + 1 + i for i in range(m)]
    ideal = [big.gen(y) * lift(g.den) - lift(g.num) for y, g in zip(yi, gens)]
    ideal.append(big.gen(zi) * lift(f.den) - lift(f.num))
    if use_w:
        ideal.append(big.gen(nx) * lift(delta) - big.one())
    order = BlockOrder([list(range(zi)), [zi], yi], big.nvars)
    basis = buchberger(ideal, order, cancel=cancel, max_pairs=max_pairs)

    grevlex = GradedRevLex()
    candidates = []
    for g in basis:
        if any(g.degree_in(i) for i in range(zi)) or g.degree_in(zi) != 1:
            continue
        A, B = {}, {}
        for mono, c in g.terms.items():
            ym = tuple(mono[i] for i in yi)
            if mono[zi]:
                B[ym] = c
            else:
                A[ym] = -c
        Bp, Ap = tag_ring.from_dict(B), tag_ring.from_dict(A)
        lead = max(Bp.terms, key=grevlex.key)
        candidates.append((Bp.degree(), grevlex.key(lead), Ap, Bp))
    candidates.sort(key=lambda t: (t[0], t[1]))
    for _, _, A, B in candidates:
        if _subst_poly(B, gens, ring).is_zero():
            continue
        R = RationalFunction(A, B)
        if R.substitute(gens, ring) != f:
            raise InternalInconsistency(f"candidate {R.to_str()} fails substitution check")
        return R
    return None


def _subst_poly(p: Polynomial, gens: Sequence[RationalFunction], ring: PolyRing) -> RationalFunction:
    return RationalFunction(p).substitute(list(gens), ring)


# -- flattening -------------------------------------------------------------------

def stabilization_bound(k: int, D: int) -> int:
    """k + k^3 * ceil(log2(k D))."""
    if k < 1 or D < 1:
        raise ValueError("k and D must be positive")
    return k + k ** 3 * math.ceil(math.log2(k * D))


@dataclass(frozen=True)
class FieldChain:
    generators: tuple
    trdegs: tuple


def chain_report(trace: SymbolicTrace, column: int = 0, *, seed: int | None = 0) -> FieldChain:
    gens = trace.column(column)
    trdegs = tuple(transcendence_degree(gens[: n + 1], seed=seed) for n in range(len(gens)))
    return FieldChain(tuple(gens), trdegs)


@dataclass(frozen=True)
class FlattenResult:
    m: int
    R: RationalFunction
    cancelling: Polynomial
    verified: bool
    trdegs: tuple
    bound_used: Optional[int]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "R": {"num": self.R.num.to_str(), "den": self.R.den.to_str()},
            "cancelling": self.cancelling.to_str(),
            "verified": self.verified,
            "trdegs": list(self.trdegs),
            "bound": self.bound_used,
        }


def cancelling_polynomial(R: RationalFunction) -> Polynomial:
    """y_{m+1} den(R) - num(R) in y_0..y_{m+1}."""
    m = R.ring.nvars - 1
    ring = R.ring.extend([f"y{m + 1}"])
    up = lambda p: p.compose([ring.gen(i) for i in range(m + 1)], ring)
    return ring.gen(m + 1) * up(R.den) - up(R.num)


def check_recursion(R: RationalFunction, column: Sequence[RationalFunction], n: int) -> bool:
    """F_{n+m+1} == R(F_n, ..., F_{n+m}) as reduced rational functions."""
    m = R.ring.nvars - 1
    window = list(column[n: n + m + 1])
    try:
        return R.substitute(window, column[0].ring) == column[n + m + 1]
    except ZeroDenominator:
        return False


def flatten(
    sys: RecSystem,
    init: Symbolic | SymbolicCustom | None = None,
    *,
    depth_limit: int | None = None,
    verify_steps: int = 2,
    seed: int | None = 0,
    cancel=None,
) -> FlattenResult:
    """Least m with F_{m+1} in Q(F_0..F_m) for the main sequence, plus R.

    With the canonical initial condition F_0 = x the search is guarded by
    :func:`stabilization_bound` (raising :class:`BoundExceeded` past it);
    custom initial conditions are only limited by ``depth_limit``.
    """
    if init is None:
        init = Symbolic()
    if not sys.field.is_rational:
        raise FieldMismatch("flattening requires the field Q")
    canonical = isinstance(init, Symbolic)
    bound = None
    if canonical and sys.degree is not None:
        bound = stabilization_bound(sys.k, max(sys.degree, 1))
    limit = depth_limit
    if limit is None:
        limit = bound if bound is not None else DEFAULT_DEPTH_LIMIT
    trace = symbolic_evaluate(sys, init, 1)
    col = sys.main
    m = 0
    while True:
        if bound is not None and m > bound:
            raise BoundExceeded(f"no stabilization up to the bound {bound}; this indicates a bug")
        if m > limit:
            raise BoundExceeded(f"no stabilization within depth limit {limit}")
        if len(trace) < m + 2:
            trace = extend_trace(sys, trace, m + 2 - len(trace))
        column = trace.column(col)
        tags = [f"y{i}" for i in range(m + 1)]
        R = subfield_membership(column[m + 1], column[: m + 1], tags, cancel=cancel)
        if R is not None:
            break
        m += 1
    need = m + 2 + verify_steps - 1
    if len(trace) < need:
        trace = extend_trace(sys, trace, need - len(trace))
    column = trace.column(col)
    verified = all(check_recursion(R, column, n) for n in range(verify_steps))
    trdegs = tuple(transcendence_degree(column[: n + 1], seed=seed) for n in range(m + 1))
    return FlattenResult(m, R, cancelling_polynomial(R), verified, trdegs, bound)
