import itertools

import pytest

from ratrec.algebra import GF2, QQ
from ratrec.circuits import circuit_eval
from ratrec.errors import ParseError, ResourceLimit
from ratrec.qbf import (
    EXISTS,
    FORALL,
    And,
    BoolConst,
    Not,
    Or,
    QbfFormula,
    Var,
    bool_to_circuit,
    brute_force_qbf,
    check_validity_via_sequence,
    compile_qbf,
    eval_bool,
    parse_qbf,
    reduction_size,
    restricted_value,
)
from ratrec.recsys import evaluate
from ratrec.zeroness import Zero, zeroness_finite_field

from helpers import enumerated_qbf_corpus

E_OR = "exists x1; forall x2; (x1 | x2)"
E_AND = "exists x1; forall x2; (x1 & x2)"


def ast_size(e):
    if isinstance(e, (Var, BoolConst)):
        return 1
    if isinstance(e, Not):
        return 1 + ast_size(e.arg)
    return 1 + ast_size(e.left) + ast_size(e.right)


# -- parsing ----------------------------------------------------------------

def test_parse_prenex():
    f = parse_qbf(E_OR)
    assert f.prefix == ((EXISTS, "x1"), (FORALL, "x2"))
    assert f.matrix == Or(Var("x1"), Var("x2"))


def test_parse_qdimacs_matches_prenex():
    f = parse_qbf("p cnf 2 1\ne 1 0\na 2 0\n1 2 0\n")
    assert f.prefix == ((EXISTS, "x1"), (FORALL, "x2"))
    assert f.matrix == Or(Var("x1"), Var("x2"))


def test_parse_tautology_and_precedence():
    f = parse_qbf("forall x1; (x1 | !x1)")
    assert f.matrix == Or(Var("x1"), Not(Var("x1")))
    g = parse_qbf("exists a; exists b; a | !a & b")
    assert g.matrix == Or(Var("a"), And(Not(Var("a")), Var("b")))


def test_parse_qdimacs_free_variables_are_existential():
    f = parse_qbf("c comment\np cnf 3 2\na 2 0\n1 -2 0\n3 0\n")
    assert f.prefix[:2] == ((EXISTS, "x1"), (EXISTS, "x3"))
    assert f.prefix[2] == (FORALL, "x2")


@pytest.mark.parametrize(
    "text",
    [
        "exists x; forall x; x",
        "exists x; x & y",
        "exists x; (x | ",
        "exist x; x",
        "exists x;",
        "p cnf 1 1\ne 1 0\n2 0\n",
        "p cnf 1 1\ne 1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_qbf(text)


# -- oracle ------------------------------------------------------------------

def test_brute_force_examples():
    assert brute_force_qbf(parse_qbf(E_OR)) is True
    assert brute_force_qbf(parse_qbf(E_AND)) is False
    assert brute_force_qbf(parse_qbf("forall x1; x1 | !x1")) is True


def test_brute_force_limit():
    prefix = tuple((EXISTS, f"v{i}") for i in range(17))
    with pytest.raises(ResourceLimit):
        brute_force_qbf(QbfFormula(prefix, Var("v0")))


# -- Boolean encoding ------------------------------------------------------------

def test_bool_encoding_truth_tables():
    for f in enumerated_qbf_corpus(60):
        names = [v for _, v in f.prefix]
        for field in (QQ, GF2):
            c = bool_to_circuit(f.matrix, field)
            for bits in itertools.product((0, 1), repeat=len(names)):
                env = dict(zip(names, bits))
                want = int(eval_bool(f.matrix, env))
                got = circuit_eval(c, {v: env[v] for v in c.labels})
                assert got == field(want)


def test_bool_encoding_single_variable_and_not():
    c = bool_to_circuit(Var("x"))
    assert circuit_eval(c, {"x": 1}) == 1 and len(c.gates) == 1
    assert circuit_eval(bool_to_circuit(Not(Var("x"))), {"x": 1}) == 0


# -- the compiled system ----------------------------------------------------------

def columns(out, steps):
    rows = evaluate(out.system, out.init, steps)
    names = out.system.names
    return {n: [int(r[i]) for r in rows] for i, n in enumerate(names)}


def test_sequence_count_and_metadata():
    out = compile_qbf(parse_qbf(E_OR))
    assert out.system.k == 3 * 2 + 1
    assert out.horizon == 5
    assert out.system.names[out.main] == "d2"
    meta = out.metadata()
    assert meta["k"] == 2 and meta["sequence_map"]["f1"] == "f^1"
    assert out.system.extended


def test_counter_table_k3():
    f = parse_qbf("exists a; forall b; exists c; a | b | c")
    cols = columns(compile_qbf(f, GF2), 7)
    assert "".join(map(str, cols["c1"])) == "01010101"
    assert "".join(map(str, cols["c2"])) == "00110011"
    assert "".join(map(str, cols["c3"])) == "00001111"


@pytest.mark.parametrize("field", [QQ, GF2])
def test_counter_closed_form(field):
    for k in (1, 2, 3):
        f = QbfFormula(tuple((EXISTS, f"v{i}") for i in range(k)), Var("v0"))
        cols = columns(compile_qbf(f, field), 2 ** k + 8)
        for i in range(1, k + 1):
            want = [int(n % 2 ** i >= 2 ** (i - 1)) for n in range(2 ** k + 9)]
            assert cols[f"c{i}"] == want


def _outer_env(f, i, n):
    # outer variable at prefix position p is driven by counter c^(k - p)
    env = {}
    for p in range(f.k - i):
        j = f.k - p
        env[f.prefix[p][1]] = (n - 1) % 2 ** j >= 2 ** (j - 1)
    return env


def test_d_sequence_law():
    for f in enumerated_qbf_corpus(200)[::4]:
        k = f.k
        cols = columns(compile_qbf(f), 2 ** k)
        for i in range(k + 1):
            for n in range(2 ** k + 1):
                got = cols[f"d{i}"][n]
                if n == 0 or n % 2 ** i:
                    assert got == 0
                else:
                    assert got == int(restricted_value(f, i, _outer_env(f, i, n)))


def test_f_sequence_law():
    for f in enumerated_qbf_corpus(200)[1::4]:
        k = f.k
        cols = columns(compile_qbf(f), 2 ** k)
        for i in range(1, k + 1):
            for n in range(2 ** i, 2 ** k + 1, 2 ** i):
                assert cols[f"f{i - 1}"][n - 1] == cols[f"d{i - 1}"][n - 2 ** (i - 1)]


def test_main_column_examples():
    cols = columns(compile_qbf(parse_qbf(E_AND)), 4)
    assert cols["d2"] == [0] * 5
    cols = columns(compile_qbf(parse_qbf(E_OR)), 4)
    assert cols["d2"][4] == 1 and cols["d2"][:4] == [0] * 4


def test_check_validity_examples():
    r = check_validity_via_sequence(parse_qbf(E_OR), GF2)
    assert r.valid and r.oracle_agrees
    r = check_validity_via_sequence(parse_qbf(E_AND), QQ)
    assert not r.valid and r.oracle_agrees
    assert check_validity_via_sequence(parse_qbf("forall x1; x1 | !x1"), oracle=False).valid
    assert check_validity_via_sequence(parse_qbf(E_OR), oracle=False).oracle_agrees is None


def test_false_formula_is_zero_over_f2():
    out = compile_qbf(parse_qbf(E_AND), GF2)
    assert isinstance(zeroness_finite_field(out.system.fused(), out.init), Zero)
    out = compile_qbf(parse_qbf(E_OR), GF2)
    assert not isinstance(zeroness_finite_field(out.system.fused(), out.init), Zero)


def test_reduction_size_linear_in_k():
    sizes = []
    for k in range(1, 9):
        f = QbfFormula(tuple((EXISTS, f"v{i}") for i in range(k)), Var("v0"))
        sizes.append(reduction_size(compile_qbf(f)))
    diffs = {b - a for a, b in zip(sizes, sizes[1:])}
    assert len(diffs) == 1


def test_reduction_size_linear_in_matrix():
    for f in enumerated_qbf_corpus(200):
        base = reduction_size(compile_qbf(QbfFormula(f.prefix, Var(f.prefix[0][1]))))
        assert reduction_size(compile_qbf(f)) - base <= 10 * ast_size(f.matrix)


def test_compile_needs_a_variable():
    with pytest.raises(ValueError):
        compile_qbf(QbfFormula((), BoolConst(True)))
