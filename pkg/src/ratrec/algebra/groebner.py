"""Buchberger's algorithm (sugar strategy, Gebauer-Moeller criteria) and normal forms."""
from __future__ import annotations

import heapq
from typing import Callable, Dict, List, Optional, Sequence

from ..errors import FieldMismatch, ResourceLimit
from .orders import GradedRevLex, MonomialOrder
from .polynomial import (
    Monomial,
    Polynomial,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class _Elem:
    __slots__ = ("lm", "lc", "terms", "sugar")

    def __init__(self, lm, lc, terms, sugar):
        self.lm = lm
        self.lc = lc
        self.terms = terms
        self.sugar = sugar


class _Ctx:
    def __init__(self, field, order: MonomialOrder):
        self.field = field
        self.order = order
        self._keys: Dict[Monomial, tuple] = {}

    def key(self, m):
        k = self._keys.get(m)
        if k is None:
            k = self.order.key(m)
            self._keys[m] = k
        return k

    def negkey(self, m):
        return tuple(-x for x in self.key(m))

    def elem(self, terms: dict, sugar: int | None = None, monic: bool = True) -> _Elem:
        lm = max(terms, key=self.key)
        lc = terms[lm]
        if monic and lc != 1:
            inv = self.field.inv(lc)
            norm = self.field.norm
            terms = {m: norm(c * inv) for m, c in terms.items()}
            lc = self.field.one
        if sugar is None:
            sugar = max(sum(m) for m in terms)
        return _Elem(lm, lc, terms, sugar)

    def reduce(self, p: dict, basis: Sequence[_Elem], full: bool = True) -> dict:
        """Normal form of p modulo basis (full or top-only reduction)."""
        field = self.field
        norm = field.norm
        p = dict(p)
        heap = [(self.negkey(m), m) for m in p]
        heapq.heapify(heap)
        r = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None:
                continue
            red = None
            for g in basis:
                if mono_divides(g.lm, m):
                    red = g
                    break
            if red is None:
                r[m] = c
                if not full:
                    r.update(p)
                    return r
                continue
            t = mono_div(m, red.lm)
            q = c if red.lc == 1 else field.div(c, red.lc)
            for gm, gc in red.terms.items():
                if gm == red.lm:
                    continue
                nm = mono_mul(gm, t)
                v = p.get(nm)
                if v is None:
                    p[nm] = norm(-q * gc)
                    heapq.heappush(heap, (self.negkey(nm), nm))
                else:
                    v = norm(v - q * gc)
                    if v:
                        p[nm] = v
                    else:
                        del p[nm]
        return r

    def spoly(self, f: _Elem, g: _Elem) -> dict:
        field = self.field
        norm = field.norm
        lcm = mono_lcm(f.lm, g.lm)
        tf, tg = mono_div(lcm, f.lm), mono_div(lcm, g.lm)
        out = {}
        for m, c in f.terms.items():
            if m != f.lm:
                out[mono_mul(m, tf)] = norm(c * g.lc)
        for m, c in g.terms.items():
            if m == g.lm:
                continue
            nm = mono_mul(m, tg)
            v = norm(out.get(nm, field.zero) - c * f.lc)
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
        return out


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(G: List[int], B: List[tuple], h: int, store: List[_Elem]):
    """Gebauer-Moeller pair update after adding store[h]."""
    lh = store[h].lm
    C = [g for g in G]
    D: List[int] = []
    lcms = {g: mono_lcm(lh, store[g].lm) for g in C}
    while C:
        g1 = C.pop()
        l1 = lcms[g1]
        if _coprime(lh, store[g1].lm) or not any(
            mono_divides(lcms[g2], l1) for g2 in C + D
        ):
            D.append(g1)
    E = [(g, h) for g in D if not _coprime(lh, store[g].lm)]
    Bn = []
    for (g1, g2, lcm12) in B:
        if (
            not mono_divides(lh, lcm12)
            or mono_lcm(store[g1].lm, lh) == lcm12
            or mono_lcm(lh, store[g2].lm) == lcm12
        ):
            Bn.append((g1, g2, lcm12))
    for g, hh in E:
        Bn.append((g, hh, lcms[g]))
    Gn = [g for g in G if not mono_divides(lh, store[g].lm)]
    Gn.append(h)
    return Gn, Bn


def _check_cancel(cancel):
    if cancel is None:
        return
    flag = cancel.is_set() if hasattr(cancel, "is_set") else cancel()
    if flag:
        raise ResourceLimit("Groebner basis computation cancelled")


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder | None = None,
    *,
    max_pairs: int | None = None,
    cancel: Optional[Callable[[], bool]] = None,
) -> List[Polynomial]:
    """Reduced Groebner basis (monic, sorted by descending leading monomial).

    ``cancel`` is an optional cooperative cancellation token: either a callable
    returning True or an object with ``is_set()`` (e.g. ``threading.Event``).
    """
    gens = [g for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise FieldMismatch("generators from different rings")
    order = order or GradedRevLex()
    ctx = _Ctx(ring.field, order)
    store: List[_Elem] = []
    G: List[int] = []
    B: List[tuple] = []
    for g in sorted(gens, key=lambda p: ctx.key(max(p.terms, key=ctx.key))):
        store.append(ctx.elem(g.terms))
        G, B = _update(G, B, len(store) - 1, store)
    processed = 0
    while B:
        _check_cancel(cancel)

        def pair_rank(pair):
            g1, g2, lcm = pair
            s1, s2 = store[g1], store[g2]
            sugar = max(
                s1.sugar + sum(lcm) - sum(s1.lm), s2.sugar + sum(lcm) - sum(s2.lm)
            )
            return (sugar, ctx.key(lcm))

        idx = min(range(len(B)), key=lambda i: pair_rank(B[i]))
        pair = B.pop(idx)
        sugar = pair_rank(pair)[0]
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise ResourceLimit(f"Groebner basis exceeded {max_pairs} S-pairs")
        s = ctx.spoly(store[pair[0]], store[pair[1]])
        if not s:
            continue
        h = ctx.reduce(s, [store[i] for i in G])
        if h:
            store.append(ctx.elem(h, sugar))
            G, B = _update(G, B, len(store) - 1, store)
    return _interreduce([store[i] for i in G], ctx, ring)


def _interreduce(elems: List[_Elem], ctx: _Ctx, ring) -> List[Polynomial]:
    elems = sorted(elems, key=lambda e: ctx.key(e.lm))
    minimal: List[_Elem] = []
    for e in elems:
        if not any(mono_divides(o.lm, e.lm) for o in minimal):
            minimal.append(e)
    out = []
    for i, e in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {m: c for m, c in e.terms.items() if m != e.lm}
        red = ctx.reduce(tail, others)
        red[e.lm] = e.lc
        out.append(ctx.elem(red))
    out.sort(key=lambda e: ctx.key(e.lm), reverse=True)
    return [Polynomial(ring, e.terms) for e in out]


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of f on full reduction by ``basis`` (unique when it is a Groebner basis)."""
    order = order or GradedRevLex()
    ctx = _Ctx(f.ring.field, order)
    elems = []
    for g in basis:
        if g.ring != f.ring:
            raise FieldMismatch("basis and polynomial live in different rings")
        if g:
            elems.append(ctx.elem(g.terms, monic=False))
    if not elems:
        return f
    return Polynomial(f.ring, ctx.reduce(f.terms, elems))


def leading_monomial(f: Polynomial, order: MonomialOrder) -> Monomial:
    return max(f.terms, key=order.key)


def is_groebner_basis(basis: Sequence[Polynomial], order: MonomialOrder | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    order = order or GradedRevLex()
    basis = [g for g in basis if g]
    if not basis:
        return True
    ctx = _Ctx(basis[0].ring.field, order)
    elems = [ctx.elem(g.terms) for g in basis]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if ctx.reduce(ctx.spoly(elems[i], elems[j]), elems):
                return False
    return True
