import random

import pytest

from ratrec.algebra import QQ, Field, PolyRing, RationalFunction, parse_expr
from ratrec.errors import BoundExceeded, FieldMismatch
from ratrec.flatten import (
    cancelling_polynomial,
    chain_report,
    check_recursion,
    flatten,
    stabilization_bound,
    subfield_membership,
    transcendence_degree,
)
from ratrec.recsys import (
    RecSystem,
    Symbolic,
    catalan_system,
    squares_chain_system,
    symbolic_evaluate,
)
from ratrec.zeroness import counterexample_custom_init, counterexample_system

from helpers import random_system

X2 = PolyRing(QQ, ["x1", "x2"])
X3 = PolyRing(QQ, ["x1", "x2", "x3"])


def fx(text, ring=X2):
    return parse_expr(text, ring)


def substitutes_to(R, gens, f):
    return R.substitute(list(gens), f.ring) == f


# -- transcendence degree ----------------------------------------------------

@pytest.mark.parametrize(
    "gens,want",
    [
        (["x1", "x1^2 + x2^2"], 2),
        ([], 0),
        (["x1", "x1^2"], 1),
        (["x1 + x2", "x1*x2", "x1^2 + x2^2"], 2),
        (["x1/x2", "x2/x1"], 1),
        (["3", "7/2"], 0),
    ],
)
def test_transcendence_degree(gens, want):
    assert transcendence_degree([fx(g) for g in gens]) == want


def test_transcendence_degree_exact_path_agrees():
    # trials=0 skips the random-point shortcut
    gens = [fx("x1 + x2", X3), fx("x1*x2*x3", X3), fx("(x1 + x2)^3 - x1*x2*x3", X3)]
    assert transcendence_degree(gens, trials=0) == 2
    assert transcendence_degree(gens) == 2


def test_transcendence_degree_rejects_finite_field():
    r = PolyRing(Field(5), ["x"])
    with pytest.raises(FieldMismatch):
        transcendence_degree([parse_expr("x", r)])


# -- subfield membership -------------------------------------------------------

def test_membership_absent_for_chain_example():
    assert subfield_membership(fx("x1*x2"), [fx("x1"), fx("x2^2")]) is None


def test_membership_square():
    R = subfield_membership(fx("x1^2"), [fx("x1")])
    assert R == parse_expr("y1^2", ["y1"])


def test_membership_difference():
    gens = [fx("x1"), fx("x1^2 + x2^2")]
    R = subfield_membership(fx("x2^2"), gens)
    assert R == parse_expr("y2 - y1^2", ["y1", "y2"])


def test_membership_rational_generators():
    gens = [fx("x1 + x2"), fx("x1*x2")]
    f = fx("1/x1 + 1/x2")
    R = subfield_membership(f, gens)
    assert R is not None and substitutes_to(R, gens, f)
    assert subfield_membership(fx("x1"), gens) is None


def test_membership_constant_and_generator():
    gens = [fx("x1/x2")]
    assert subfield_membership(fx("5"), gens) == parse_expr("5", ["y1"])
    assert subfield_membership(fx("x1/x2"), gens) == parse_expr("y1", ["y1"])


def test_membership_consistent_with_trdeg():
    rng = random.Random(17)
    pool = ["x1", "x2", "x1*x2", "x1^2 + x2", "x1 + x2", "x1/x2", "x2^2"]
    for _ in range(25):
        gens = [fx(g) for g in rng.sample(pool, rng.randint(1, 2))]
        f = fx(rng.choice(pool))
        R = subfield_membership(f, gens)
        if transcendence_degree(gens + [f]) > transcendence_degree(gens):
            assert R is None
        if R is not None:
            assert substitutes_to(R, gens, f)


# -- bound -------------------------------------------------------------------

@pytest.mark.parametrize("k,D,want", [(2, 2, 18), (1, 1, 1), (2, 3, 26), (3, 3, 3 + 27 * 4)])
def test_stabilization_bound(k, D, want):
    assert stabilization_bound(k, D) == want


def test_stabilization_bound_domain():
    with pytest.raises(ValueError):
        stabilization_bound(0, 2)


# -- chains -----------------------------------------------------------------------

def test_chain_report_squares():
    tr = symbolic_evaluate(squares_chain_system(), Symbolic(), 2)
    assert chain_report(tr).trdegs == (1, 2, 2)


def test_chain_report_identity():
    sys = RecSystem.from_exprs(["a", "b"], ["a", "b"])
    tr = symbolic_evaluate(sys, Symbolic(), 4)
    assert chain_report(tr).trdegs == (1,) * 5


def test_chain_report_catalan_symbolic():
    sys, _ = catalan_system()
    tr = symbolic_evaluate(sys, Symbolic(), 2)
    assert chain_report(tr).trdegs == (1, 2, 2)


def test_chain_is_monotone_on_random_systems():
    rng = random.Random(31)
    for _ in range(15):
        sys = random_system(rng, rng.randint(1, 3), rng.randint(1, 2), nterms=2)
        try:
            tr = symbolic_evaluate(sys, Symbolic(), 4, max_terms=200)
        except Exception:
            continue
        t = chain_report(tr).trdegs
        steps = [b - a for a, b in zip(t, t[1:])]
        assert all(s in (0, 1) for s in steps)
        assert all(x <= sys.k for x in t)
        if 0 in steps:
            assert all(s == 0 for s in steps[steps.index(0):])


# -- flatten ------------------------------------------------------------------------

def test_flatten_squares_chain():
    res = flatten(squares_chain_system())
    assert res.m == 2 and res.verified
    assert res.trdegs == (1, 2, 2)
    assert res.bound_used == 18


def test_flatten_identity():
    sys = RecSystem.from_exprs(["u"], ["u"])
    res = flatten(sys)
    assert res.m == 0 and res.verified
    assert res.R == parse_expr("y0", ["y0"])


def test_flatten_counterexample_d3():
    sys, _ = counterexample_system(3)
    res = flatten(sys, counterexample_custom_init(3))
    assert res.m == 1 and res.verified
    assert res.bound_used is None
    y = PolyRing(QQ, ["y0", "y1"])
    expected = parse_expr("y1*(4*y1 - y0)/(y1 + 2*y0)", y)
    tr = symbolic_evaluate(sys, counterexample_custom_init(3), 5)
    col = tr.column(0)
    for n in range(3):
        assert check_recursion(res.R, col, n)
        assert expected.substitute(col[n:n + 2], tr.ring) == col[n + 2]


def test_flatten_result_json_and_cancelling():
    sys, _ = catalan_system()
    res = flatten(sys)
    obj = res.to_json()
    assert set(obj) == {"m", "R", "cancelling", "verified", "trdegs", "bound"}
    assert obj["m"] == res.m
    P = res.cancelling
    assert P == cancelling_polynomial(res.R)
    tr = symbolic_evaluate(sys, Symbolic(), res.m + 4)
    col = tr.column(0)
    for n in range(3):
        assert RationalFunction(P).substitute(col[n:n + res.m + 2], tr.ring).is_zero()


def test_flatten_first_membership_persists():
    rng = random.Random(41)
    checked = 0
    for _ in range(20):
        sys = random_system(rng, rng.randint(1, 2), rng.randint(1, 2))
        try:
            res = flatten(sys)
        except Exception:
            continue
        tr = symbolic_evaluate(sys, Symbolic(), res.m + 3)
        col = tr.column(sys.main)
        m = res.m
        nxt = subfield_membership(col[m + 2], col[: m + 2], [f"y{i}" for i in range(m + 2)])
        assert nxt is not None
        assert res.m <= stabilization_bound(sys.k, max(sys.degree, 1))
        checked += 1
    assert checked >= 15


def test_flatten_depth_limit():
    sys = squares_chain_system()
    with pytest.raises(BoundExceeded):
        flatten(sys, depth_limit=1)


def test_flatten_rejects_finite_field():
    sys = RecSystem.from_exprs(["u"], ["u"], Field(3))
    with pytest.raises(FieldMismatch):
        flatten(sys)
