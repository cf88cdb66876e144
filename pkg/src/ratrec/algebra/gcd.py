"""Multivariate polynomial GCD.

Recursive content/primitive-part decomposition in a chosen main variable, with
the subresultant polynomial remainder sequence on primitive parts.  Works over
Q and over F_p.  Desk scale only; no modular or EZ-GCD tricks.
"""
from __future__ import annotations

from typing import Dict, List

from ..errors import FieldMismatch
from .polynomial import Monomial, Polynomial, mono_gcd


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Normalized gcd; ``poly_gcd(a, 0)`` is ``a.canonical()``."""
    if a.ring != b.ring:
        raise FieldMismatch("gcd of polynomials from different rings")
    if not a:
        return b.canonical()
    if not b:
        return a.canonical()
    return _gcd(a, b).canonical()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if not a or not b:
        return a.ring.zero()
    g = poly_gcd(a, b)
    return (a.exact_div(g) * b).canonical()


def _split(p: Polynomial, v: int) -> Dict[int, Polynomial]:
    """Coefficients of p viewed as a polynomial in variable v."""
    parts: Dict[int, dict] = {}
    for m, c in p.terms.items():
        e = m[v]
        if e:
            m = m[:v] + (0,) + m[v + 1:]
        parts.setdefault(e, {})[m] = c
    return {e: Polynomial(p.ring, t) for e, t in parts.items()}


def _shift(p: Polynomial, v: int, e: int) -> Polynomial:
    if e == 0:
        return p
    return Polynomial(
        p.ring, {m[:v] + (m[v] + e,) + m[v + 1:]: c for m, c in p.terms.items()}
    )


def _content_in(p: Polynomial, v: int) -> Polynomial:
    coeffs = sorted(_split(p, v).values(), key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    return g


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd of two nonzero polynomials, up to a unit."""
    ring = a.ring
    if a.is_constant() or b.is_constant():
        return ring.one()
    if a.is_monomial() or b.is_monomial():
        if not a.is_monomial():
            a, b = b, a
        (m,) = a.terms
        g: Monomial = m
        for t in b.terms:
            g = mono_gcd(g, t)
        return Polynomial(ring, {g: ring.field.one})
    va, vb = a.variables(), b.variables()
    common = va & vb
    if not common:
        return ring.one()
    only_a, only_b = va - vb, vb - va
    if only_a:
        return _gcd(b, _content_in(a, min(only_a)))
    if only_b:
        return _gcd(a, _content_in(b, min(only_b)))
    if len(b) <= len(a):
        q = a.try_div(b)
        if q is not None:
            return b
    else:
        q = b.try_div(a)
        if q is not None:
            return a
    # main variable: the one of least degree keeps the PRS short
    v = min(common, key=lambda i: (max(a.degree_in(i), b.degree_in(i)), i))
    ca, cb = _content_in(a, v), _content_in(b, v)
    pa = a if ca.is_constant() else a.exact_div(ca)
    pb = b if cb.is_constant() else b.exact_div(cb)
    c = _gcd(ca, cb)
    g = _subresultant(pa, pb, v)
    if g.degree_in(v) == 0:
        return c
    cg = _content_in(g, v)
    if not cg.is_constant():
        g = g.exact_div(cg)
    return c * g


def _as_list(p: Polynomial, v: int) -> List[Polynomial]:
    parts = _split(p, v)
    n = max(parts)
    zero = p.ring.zero()
    return [parts.get(i, zero) for i in range(n + 1)]


def _from_list(coeffs: List[Polynomial], v: int, ring) -> Polynomial:
    acc = ring.zero()
    for i, c in enumerate(coeffs):
        if c:
            acc = acc + _shift(c, v, i)
    return acc


def _trim(c: List[Polynomial]) -> List[Polynomial]:
    while c and not c[-1]:
        c.pop()
    return c


def _prem(A: List[Polynomial], B: List[Polynomial]) -> List[Polynomial]:
    dB = len(B) - 1
    lcB = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= dB:
        s = R[-1]
        shift = len(R) - 1 - dB
        new = [r * lcB for r in R[:-1]]
        for i in range(dB):
            if B[i]:
                new[i + shift] = new[i + shift] - s * B[i]
        R = _trim(new)
        e -= 1
    if e > 0 and R:
        f = lcB ** e
        R = [r * f for r in R]
    return R


def _subresultant(a: Polynomial, b: Polynomial, v: int) -> Polynomial:
    """Last nonzero subresultant of primitive a, b (in variable v)."""
    ring = a.ring
    A, B = _as_list(a, v), _as_list(b, v)
    if len(B) > len(A):
        A, B = B, A
    g = ring.one()
    h = ring.one()
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return ring.one()
        div = g * h ** delta
        A, B = B, [r.exact_div(div) for r in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
    return _from_list(B, v, ring)
