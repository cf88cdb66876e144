import math
import random
from fractions import Fraction

import pytest

from ratrec.algebra import QQ, Field, PolyRing, parse_expr
from ratrec.errors import DivisionByZeroEvent, FieldMismatch, ResourceLimit
from ratrec.recsys import (
    PRecurrence,
    RecSystem,
    SimpleRecursion,
    Symbolic,
    apply_step_homomorphism,
    catalan_system,
    degree_profile,
    evaluate,
    extend_trace,
    factorial_simple,
    factorial_system,
    from_precursive,
    main_column,
    numeric,
    simple_evaluate,
    squares_chain_system,
    symbolic_evaluate,
)
from ratrec.zeroness import counterexample_custom_init, counterexample_system

from helpers import random_extended_system, tame_symbolic_systems


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def x_ring(k):
    return PolyRing(QQ, [f"x{i + 1}" for i in range(k)])


# -- construction ---------------------------------------------------------------

def test_update_may_not_read_unknown_names():
    with pytest.raises(Exception):
        RecSystem.from_exprs(["u"], ["u + w"])


def test_extended_updates_read_only_earlier_next_values():
    sys = RecSystem.from_exprs(["a", "b"], ["a + 1", "next_a * b"], extended=True)
    assert sys.extended
    with pytest.raises(ValueError):
        RecSystem.from_exprs(["a", "b"], ["next_b", "b"], extended=True)


def test_degree_and_polynomiality():
    sys, _ = catalan_system()
    assert sys.degree == 2 and not sys.is_polynomial
    assert squares_chain_system().degree == 2
    assert factorial_system()[0].is_polynomial


# -- numeric evaluation --------------------------------------------------------

def test_catalan_six_steps():
    sys, init = catalan_system()
    col = main_column(evaluate(sys, init, 6), sys)
    assert col == [math.comb(2 * n, n) // (n + 1) for n in range(7)]


def test_factorial_five_steps():
    sys, init = factorial_system()
    assert main_column(evaluate(sys, init, 5), sys) == [math.factorial(n) for n in range(6)]


def test_division_by_zero_reports_step_and_equation():
    sys = RecSystem.from_exprs(["u"], ["1/u"])
    with pytest.raises(DivisionByZeroEvent) as e:
        evaluate(sys, numeric(sys, [0]), 3)
    assert (e.value.step, e.value.equation) == (0, 0)
    sys = RecSystem.from_exprs(["u", "v"], ["u + 1", "v/(u - 2)"])
    with pytest.raises(DivisionByZeroEvent) as e:
        evaluate(sys, numeric(sys, [0, 1]), 5)
    assert (e.value.step, e.value.equation) == (2, 1)


def test_evaluate_over_finite_field():
    sys = RecSystem.from_exprs(["u"], ["u + 1"], Field(3))
    col = main_column(evaluate(sys, numeric(sys, [0]), 5), sys)
    assert [int(v) for v in col] == [0, 1, 2, 0, 1, 2]


def test_extended_equals_fused_random():
    rng = random.Random(21)
    for field, degree in ((QQ, 1), (Field(2), 3), (Field(3), 3)):
        for _ in range(10):
            k = rng.randint(1, 3)
            sys = random_extended_system(rng, k, field, degree)
            init = numeric(sys, [rng.randint(-1, 1) for _ in range(k)])
            assert evaluate(sys, init, 32) == evaluate(sys.fused(), init, 32)


# -- symbolic evaluation ------------------------------------------------------

def test_chain_symbolic_two_steps():
    sys = squares_chain_system()
    tr = symbolic_evaluate(sys, Symbolic(), 2)
    r = tr.ring
    assert tr.column(0)[1] == parse_expr("x1^2 + x2^2", r)
    assert tr.column(0)[2] == parse_expr("(x1^2 + x2^2)^2 + (x1 + x2)^2", r)
    prof = degree_profile(tr, 2, 2)
    assert [(p.d_n, p.bound, p.ok) for p in prof] == [(1, 1, True), (2, 4, True), (4, 16, True)]


def test_identity_system_is_fixed():
    sys = RecSystem.from_exprs(["a", "b", "c"], ["a", "b", "c"])
    tr = symbolic_evaluate(sys, Symbolic(), 4)
    assert all(row == tr.rows[0] for row in tr.rows)
    assert all(p.d_n == 1 and p.ok for p in degree_profile(tr, 3, 1))


def test_custom_init_shift():
    sys, _ = counterexample_system(3)
    tr = symbolic_evaluate(sys, counterexample_custom_init(3), 4)
    r = tr.ring
    for n, f in enumerate(tr.column(0)):
        assert f == parse_expr(f"(x+{n})*(x+{n}-1)*(x+{n}-2)", r)


def test_symbolic_needs_rationals():
    sys = RecSystem.from_exprs(["u"], ["u^2"], Field(5))
    with pytest.raises(FieldMismatch):
        symbolic_evaluate(sys, Symbolic(), 1)


def test_symbolic_budget():
    sys = RecSystem.from_exprs(["u", "v"], ["u^2 + v^2 + u*v + 1", "u + v^2"])
    with pytest.raises(ResourceLimit):
        symbolic_evaluate(sys, Symbolic(), 6, max_terms=50)


def test_symbolic_agrees_with_numeric():
    systems, traces, _ = tame_symbolic_systems(30, 3, 200, 4)
    rng = random.Random(9)
    checked = 0
    for sys, tr in zip(systems, traces):
        pt = [rng.randint(-4, 4) for _ in range(sys.k)]
        try:
            rows = evaluate(sys, numeric(sys, pt), len(tr) - 1)
        except DivisionByZeroEvent:
            continue
        for row, srow in zip(rows, tr.rows):
            vals = []
            for f in srow:
                if not f.den.evaluate(pt):
                    break
                vals.append(f.evaluate(pt))
            else:
                assert tuple(vals) == row
        checked += 1
    assert checked >= 20


def test_extend_trace_matches_direct():
    sys, _ = catalan_system()
    short = symbolic_evaluate(sys, Symbolic(), 2)
    assert extend_trace(sys, short, 2).rows == symbolic_evaluate(sys, Symbolic(), 4).rows


# -- step homomorphism --------------------------------------------------------

def test_step_homomorphism_examples():
    sys = squares_chain_system()
    r = x_ring(2)
    assert apply_step_homomorphism(sys, parse_expr("x1", r)) == parse_expr("x1^2 + x2^2", r)
    assert apply_step_homomorphism(sys, parse_expr("7/3", r)) == parse_expr("7/3", r)
    assert apply_step_homomorphism(sys, parse_expr("x1 + x2", r)) == parse_expr("x1^2 + x2^2 + x1 + x2", r)


def test_step_homomorphism_commutes_with_trace():
    systems, traces, _ = tame_symbolic_systems(20, 5, 150, 4)
    for sys, tr in zip(systems, traces):
        for n in range(len(tr) - 1):
            for i in range(sys.k):
                assert apply_step_homomorphism(sys, tr.rows[n][i]) == tr.rows[n + 1][i]


def test_degree_profile_random():
    systems, traces, _ = tame_symbolic_systems(40, 13, 300, 6)
    for sys, tr in zip(systems, traces):
        assert all(r.ok for r in degree_profile(tr, sys.k, sys.degree))
        assert degree_profile(tr, sys.k, sys.degree)[0].d_n == 1


def test_degree_profile_without_D():
    tr = symbolic_evaluate(squares_chain_system(), Symbolic(), 1)
    assert [r.bound for r in degree_profile(tr, 2, None)] == [None, None]


# -- P-recursive ------------------------------------------------------------------

def test_precursive_factorial():
    rec = PRecurrence.from_exprs(["-(n+1)", "1"], [1])
    sys, init = from_precursive(rec)
    assert sys.k == 3
    assert main_column(evaluate(sys, init, 19), sys) == [math.factorial(n) for n in range(20)]


def test_precursive_fibonacci():
    rec = PRecurrence.from_exprs(["-1", "-1", "1"], [0, 1])
    sys, init = from_precursive(rec)
    assert main_column(evaluate(sys, init, 19), sys) == [fib(n) for n in range(20)]


def test_precursive_full_initial_checked():
    PRecurrence.from_exprs(["-(n+1)", "1"], [1, 1])
    with pytest.raises(ValueError):
        PRecurrence.from_exprs(["-(n+1)", "1"], [1, 2])


def test_precursive_order_zero():
    rec = PRecurrence.from_exprs(["1"], [0])
    sys, init = from_precursive(rec)
    assert main_column(evaluate(sys, init, 5), sys) == [0] * 6


def test_precursive_vanishing_leading_coefficient():
    # (n - 2) a_{n+1} = a_n: P_1 vanishes at n = 2
    rec = PRecurrence.from_exprs(["-1", "n - 2"], [1])
    sys, init = from_precursive(rec)
    with pytest.raises(DivisionByZeroEvent):
        evaluate(sys, init, 5)


def test_precursive_rational_values():
    # (n + 2) a_{n+1} = a_n, a_0 = 1  ->  a_n = 1/(n+1)!
    rec = PRecurrence.from_exprs(["-1", "n + 2"], [1])
    sys, init = from_precursive(rec)
    col = main_column(evaluate(sys, init, 8), sys)
    assert col == [Fraction(1, math.factorial(n + 1)) for n in range(9)]


# -- simple recursions -----------------------------------------------------------

def test_simple_factorial():
    assert simple_evaluate(factorial_simple(), 20) == [math.factorial(n) for n in range(21)]


def test_simple_constant():
    sr = SimpleRecursion.from_expr("y0", 0, [5])
    assert simple_evaluate(sr, 4) == [5] * 5


def test_simple_undefined_start():
    sr = SimpleRecursion.from_expr("y1*(4*y1 - y0)/(y1 + 2*y0)", 1, [0, 0])
    with pytest.raises(DivisionByZeroEvent) as e:
        simple_evaluate(sr, 3)
    assert e.value.step == 1


def test_simple_needs_matching_initial():
    with pytest.raises(ValueError):
        SimpleRecursion.from_expr("y0 + y1", 1, [1])
