"""Shared generators for randomized tests (all seeded, so runs are reproducible)."""
from __future__ import annotations

import functools
import itertools
import random
import time
from typing import List, Tuple

from ratrec.algebra import QQ, Field, PolyRing, RationalFunction
from ratrec.errors import ResourceLimit
from ratrec.qbf import EXISTS, FORALL, And, Not, Or, QbfFormula, Var, eval_bool, free_vars
from ratrec.recsys import RecSystem, next_name, numeric, symbolic_evaluate

NAMES = ["u", "v", "w"]


def random_poly(rng: random.Random, ring: PolyRing, nvars: int, degree: int, nterms: int, coeffs=(-2, -1, 1, 2, 3)):
    """Random polynomial in the first ``nvars`` variables of ``ring`` with total degree <= degree."""
    terms = {}
    for _ in range(nterms):
        d = rng.randint(0, degree)
        e = [0] * ring.nvars
        for _ in range(d):
            e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = rng.choice(coeffs)
    return ring.from_dict(terms)


def random_system(rng: random.Random, k: int, D: int, *, rational: bool = False, field: Field = QQ, nterms: int = 2) -> RecSystem:
    """Random standard system whose maximum update degree is exactly D."""
    names = NAMES[:k]
    ring = PolyRing(field, names)
    while True:
        ups = []
        for _ in range(k):
            num = random_poly(rng, ring, k, D, rng.randint(1, nterms))
            if not num:
                num = ring.gen(rng.randrange(k))
            f = RationalFunction(num)
            if rational and rng.random() < 0.4:
                den = random_poly(rng, ring, k, 1, 1, coeffs=(1, 2)) + ring.one()
                if den:
                    f = RationalFunction(num, den)
            ups.append(f)
        sys = RecSystem(field, tuple(names), tuple(ups))
        if sys.degree == D:
            return sys


@functools.lru_cache(maxsize=None)
def tame_symbolic_systems(count: int, seed: int, max_terms: int = 400, steps: int = 6, kmax: int = 3, Dmax: int = 3):
    """``count`` random systems (k <= kmax, D <= Dmax) whose symbolic traces stay
    within ``max_terms`` terms per entry for ``steps`` steps.

    Returns (systems, traces, rejected).  Candidates whose traces blow past the
    budget are rejected and redrawn; the number of rejections is reported.
    """
    rng = random.Random(seed)
    systems, traces = [], []
    rejected = 0
    while len(systems) < count:
        k = rng.randint(1, kmax)
        D = rng.randint(1, Dmax)
        sys = random_system(rng, k, D, rational=rng.random() < 0.3)
        try:
            trace = symbolic_evaluate(sys, None, steps, max_terms=max_terms)
        except (ResourceLimit, ZeroDivisionError):
            rejected += 1
            continue
        systems.append(sys)
        traces.append(trace)
    return tuple(systems), tuple(traces), rejected


@functools.lru_cache(maxsize=None)
def relation_systems(count: int = 50, seed: int = 88, budget: float = 5.0):
    """``count`` random systems (k <= 3, D <= 2) that flatten in canonical mode.

    Candidates whose 5-step trace exceeds 300 terms per entry, or whose
    Groebner work overruns ``budget`` seconds, are redrawn.  Returns
    (systems, flatten results, rejected).
    """
    from ratrec.flatten import flatten

    rng = random.Random(seed)
    systems, results = [], []
    rejected = 0
    while len(systems) < count:
        sys = random_system(rng, rng.randint(1, 3), rng.randint(1, 2), rational=rng.random() < 0.3)
        try:
            symbolic_evaluate(sys, None, 5, max_terms=300)
            res = flatten(sys, cancel=deadline(budget))
        except (ResourceLimit, ZeroDivisionError):
            rejected += 1
            continue
        systems.append(sys)
        results.append(res)
    return tuple(systems), tuple(results), rejected


def random_extended_system(rng: random.Random, k: int, field: Field, degree: int, coeffs=(-1, 1, 2)) -> RecSystem:
    names = NAMES[:k]
    allnames = names + [next_name(n) for n in names]
    ring = PolyRing(field, allnames)
    ups = []
    for i in range(k):
        nv = k + i  # x's and z_1..z_{i-1}
        terms = {}
        for _ in range(rng.randint(1, 3)):
            e = [0] * (2 * k)
            for _ in range(rng.randint(0, degree)):
                e[rng.randrange(nv)] += 1
            terms[tuple(e)] = rng.choice(coeffs)
        p = ring.from_dict(terms)
        if not p:
            p = ring.one()
        ups.append(RationalFunction(p))
    return RecSystem(field, tuple(names), tuple(ups), True)


def deadline(seconds: float):
    end = time.monotonic() + seconds
    return lambda: time.monotonic() > end


# -- QBF corpus --------------------------------------------------------------------

QBF_VARS = ("a", "b", "c")


def _asts_up_to_depth(depth: int) -> List:
    levels = [[Var(v) for v in QBF_VARS]]
    seen = list(levels[0])
    for _ in range(depth):
        prev = seen[:]
        new = [Not(e) for e in prev]
        for x, y in itertools.product(prev, repeat=2):
            new.append(And(x, y))
            new.append(Or(x, y))
        seen.extend(new)
    return seen


def _truth_table(e) -> Tuple:
    vs = sorted(free_vars(e))
    rows = []
    for bits in itertools.product((False, True), repeat=len(QBF_VARS)):
        env = dict(zip(QBF_VARS, bits))
        rows.append(eval_bool(e, env))
    return tuple(vs), tuple(rows)


@functools.lru_cache(maxsize=None)
def enumerated_qbf_corpus(size: int = 200) -> Tuple[QbfFormula, ...]:
    """The first ``size`` semantically distinct matrices of depth <= 3 over a, b, c
    (enumerated by depth, then construction order), each closed by a prefix over
    its own variables whose quantifier pattern cycles with the instance index."""
    out = []
    seen = set()
    level2 = _asts_up_to_depth(2)
    candidates = itertools.chain(level2, _depth3_stream(level2))
    for e in candidates:
        key = _truth_table(e)
        if key in seen:
            continue
        seen.add(key)
        vs = key[0]
        idx = len(out)
        prefix = tuple((EXISTS if (idx >> j) & 1 == 0 else FORALL, v) for j, v in enumerate(vs))
        out.append(QbfFormula(prefix, e))
        if len(out) == size:
            break
    if len(out) < size:
        raise RuntimeError("corpus smaller than requested")
    return tuple(out)


def _depth3_stream(level2):
    for e in level2:
        yield Not(e)
    for x, y in itertools.product(level2, repeat=2):
        yield And(x, y)
        yield Or(x, y)


def random_matrix(rng: random.Random, vs, depth: int):
    if depth == 0 or rng.random() < 0.25:
        return Var(rng.choice(vs))
    r = rng.random()
    if r < 0.2:
        return Not(random_matrix(rng, vs, depth - 1))
    op = And if r < 0.6 else Or
    return op(random_matrix(rng, vs, depth - 1), random_matrix(rng, vs, depth - 1))


@functools.lru_cache(maxsize=None)
def random_k4_corpus(count: int = 50, seed: int = 4) -> Tuple[QbfFormula, ...]:
    rng = random.Random(seed)
    vs = ["p", "q", "r", "s"]
    out = []
    while len(out) < count:
        m = random_matrix(rng, vs, 4)
        prefix = tuple((rng.choice([EXISTS, FORALL]), v) for v in vs)
        out.append(QbfFormula(prefix, m))
    return tuple(out)


def numeric_init(sys, rng, lo=-3, hi=3):
    return numeric(sys, [rng.randint(lo, hi) for _ in range(sys.k)])
