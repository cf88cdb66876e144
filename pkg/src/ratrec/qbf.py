"""Quantified Boolean formulas and their compilation into extended polyrec systems.

The compiled system has 3k + 1 sequences: counters c1..ck, level values
d0..dk and memories f0..f(k-1).  With every initial value 0, the main
sequence dk is nonzero (at n = 2^k) exactly when the formula is true.

Counter c^i is periodic with period 2^i (0 on the first half, 1 on the
second).  d^i is nonzero only at multiples of 2^i, where it combines the two
halves of d^(i-1) with the quantifier of the variable attached to c^i.  That
variable is the i-th one counted from the *innermost* end of the prefix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .algebra.fields import Field, QQ
from .circuits import Circuit, CircuitBuilder, circuit_stats
from .errors import ParseError, ResourceLimit
from .recsys import Numeric, RecSystem, evaluate, next_name

EXISTS = "exists"
FORALL = "forall"

BRUTE_FORCE_LIMIT = 16


# -- Boolean AST --------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BoolConst:
    value: bool


BoolExpr = Union[Var, Not, And, Or, BoolConst]


def free_vars(e: BoolExpr) -> List[str]:
    out: List[str] = []

    def walk(x):
        if isinstance(x, Var):
            if x.name not in out:
                out.append(x.name)
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, (And, Or)):
            walk(x.left)
            walk(x.right)

    walk(e)
    return out


def eval_bool(e: BoolExpr, env: Mapping[str, bool]) -> bool:
    if isinstance(e, Var):
        return bool(env[e.name])
    if isinstance(e, Not):
        return not eval_bool(e.arg, env)
    if isinstance(e, And):
        return eval_bool(e.left, env) and eval_bool(e.right, env)
    if isinstance(e, Or):
        return eval_bool(e.left, env) or eval_bool(e.right, env)
    return e.value


def to_text(e: BoolExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Not):
        return "!" + to_text(e.arg)
    op = " & " if isinstance(e, And) else " | "
    return f"({to_text(e.left)}{op}{to_text(e.right)})"


@dataclass(frozen=True)
class QbfFormula:
    prefix: Tuple[Tuple[str, str], ...]
    matrix: BoolExpr

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple((q, v) for q, v in self.prefix))
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise ParseError("a variable is bound twice")
        for q, _ in self.prefix:
            if q not in (EXISTS, FORALL):
                raise ParseError(f"unknown quantifier {q!r}")
        free = [v for v in free_vars(self.matrix) if v not in names]
        if free:
            raise ParseError(f"free variable {free[0]!r}")

    @property
    def k(self) -> int:
        return len(self.prefix)

    def to_text(self) -> str:
        return "; ".join([f"{q} {v}" for q, v in self.prefix] + [to_text(self.matrix)])


# -- parsing -------------------------------------------------------------------

_BTOK = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([&|!()~-]))")


def parse_matrix(text: str, offset: int = 0) -> BoolExpr:
    """Boolean expression over & | ! ( ) with ! > & > | precedence."""
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _BTOK.match(text, pos)
        if m is None:
            j = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[j]!r}", offset + j)
        if m.group(1):
            toks.append(("id", m.group(1), offset + m.start(1)))
        else:
            ch = m.group(2)
            toks.append(("op", "!" if ch in "~-" else ch, offset + m.start(2)))
        pos = m.end()
    toks.append(("end", "", offset + len(text)))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def disj():
        acc = conj()
        while peek()[:2] == ("op", "|"):
            take()
            acc = Or(acc, conj())
        return acc

    def conj():
        acc = neg()
        while peek()[:2] == ("op", "&"):
            take()
            acc = And(acc, neg())
        return acc

    def neg():
        if peek()[:2] == ("op", "!"):
            take()
            return Not(neg())
        return atom()

    def atom():
        kind, v, p = take()
        if kind == "id":
            if v in ("true", "false"):
                return BoolConst(v == "true")
            return Var(v)
        if (kind, v) == ("op", "("):
            e = disj()
            kind2, v2, p2 = take()
            if (kind2, v2) != ("op", ")"):
                raise ParseError("expected ')'", p2)
            return e
        raise ParseError(f"unexpected {v or 'end of input'!r}", p)

    e = disj()
    kind, v, p = peek()
    if kind != "end":
        raise ParseError(f"unexpected token {v!r}", p)
    return e


def _parse_prenex(text: str) -> QbfFormula:
    parts = text.split(";")
    prefix = []
    offset = 0
    for part in parts[:-1]:
        words = part.split()
        if not words or words[0] not in (EXISTS, FORALL, "e", "a"):
            raise ParseError(f"expected a quantifier declaration, found {part.strip()!r}", offset)
        q = EXISTS if words[0] in (EXISTS, "e") else FORALL
        if len(words) < 2:
            raise ParseError("quantifier without a variable", offset)
        for w in words[1:]:
            w = w.rstrip(",")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", w):
                raise ParseError(f"bad variable name {w!r}", offset)
            prefix.append((q, w))
        offset += len(part) + 1
    if not parts[-1].strip():
        raise ParseError("missing matrix", offset)
    return QbfFormula(tuple(prefix), parse_matrix(parts[-1], offset))


def _parse_qdimacs(text: str) -> QbfFormula:
    prefix: List[Tuple[str, str]] = []
    clauses: List[List[int]] = []
    nvars = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        words = line.split()
        if words[0] == "p":
            if len(words) != 4 or words[1] != "cnf":
                raise ParseError(f"line {lineno}: bad problem line")
            nvars = int(words[2])
            continue
        if nvars is None:
            raise ParseError(f"line {lineno}: data before the problem line")
        try:
            if words[0] in ("e", "a"):
                nums = [int(w) for w in words[1:]]
                if not nums or nums[-1] != 0:
                    raise ParseError(f"line {lineno}: quantifier line must end with 0")
                q = EXISTS if words[0] == "e" else FORALL
                prefix.extend((q, f"x{v}") for v in nums[:-1])
            else:
                nums = [int(w) for w in words]
                if nums[-1] != 0:
                    raise ParseError(f"line {lineno}: clause must end with 0")
                clauses.append(nums[:-1])
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers") from None
    if nvars is None:
        raise ParseError("missing 'p cnf' line")
    bound = {v for _, v in prefix}
    for c in clauses:
        for lit in c:
            if abs(lit) > nvars:
                raise ParseError(f"literal {lit} exceeds the declared {nvars} variables")
    # unquantified variables are existential in an outermost block
    free = sorted({abs(l) for c in clauses for l in c if f"x{abs(l)}" not in bound})
    prefix = [(EXISTS, f"x{v}") for v in free] + prefix
    matrix: Optional[BoolExpr] = None
    for c in clauses:
        cl: Optional[BoolExpr] = None
        for lit in c:
            atom: BoolExpr = Var(f"x{abs(lit)}")
            if lit < 0:
                atom = Not(atom)
            cl = atom if cl is None else Or(cl, atom)
        if cl is None:
            cl = BoolConst(False)
        matrix = cl if matrix is None else And(matrix, cl)
    return QbfFormula(tuple(prefix), matrix if matrix is not None else BoolConst(True))


def parse_qbf(text: str) -> QbfFormula:
    """Prenex text (``exists x; forall y; x | y``) or QDIMACS."""
    if re.search(r"^\s*p\s+cnf", text, re.M):
        return _parse_qdimacs(text)
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    return _parse_prenex(" ".join(lines))


# -- oracle -----------------------------------------------------------------

def brute_force_qbf(f: QbfFormula, limit: int = BRUTE_FORCE_LIMIT) -> bool:
    if f.k > limit:
        raise ResourceLimit(f"{f.k} variables exceed the brute-force limit {limit}")

    def rec(i: int, env: Dict[str, bool]) -> bool:
        if i == f.k:
            return eval_bool(f.matrix, env)
        q, v = f.prefix[i]
        branches = (rec(i + 1, {**env, v: b}) for b in (False, True))
        return any(branches) if q == EXISTS else all(branches)

    return rec(0, {})


def restricted_value(f: QbfFormula, i: int, outer: Mapping[str, bool]) -> bool:
    """Truth of the innermost i quantifiers with the outer variables fixed."""
    inner = f.prefix[f.k - i:]
    env = dict(outer)

    def rec(j: int) -> bool:
        if j == len(inner):
            return eval_bool(f.matrix, env)
        q, v = inner[j]
        vals = []
        for b in (False, True):
            env[v] = b
            vals.append(rec(j + 1))
        del env[v]
        return any(vals) if q == EXISTS else all(vals)

    return rec(0)


# -- polynomial encoding -----------------------------------------------------------

class _BoolCircuits:
    """Shares gates between Boolean encodings built in one circuit."""

    def __init__(self, b: CircuitBuilder):
        self.b = b

    def one_minus(self, a: int) -> int:
        return self.b.add(self.b.const(1), self.b.neg(a))

    def encode(self, e: BoolExpr, env: Mapping[str, int], memo: Dict) -> int:
        if e in memo:
            return memo[e]
        b = self.b
        if isinstance(e, Var):
            g = env[e.name]
        elif isinstance(e, BoolConst):
            g = b.const(1 if e.value else 0)
        elif isinstance(e, Not):
            g = self.one_minus(self.encode(e.arg, env, memo))
        elif isinstance(e, And):
            g = b.mul(self.encode(e.left, env, memo), self.encode(e.right, env, memo))
        else:
            nl = self.one_minus(self.encode(e.left, env, memo))
            nr = self.one_minus(self.encode(e.right, env, memo))
            g = self.one_minus(b.mul(nl, nr))
        memo[e] = g
        return g


def bool_to_circuit(matrix: BoolExpr, field: Field = QQ, labels: Mapping[str, str] | None = None) -> Circuit:
    """Circuit for P_matrix: x -> x, !a -> 1 - a, a & b -> ab, a | b -> 1 - (1-a)(1-b)."""
    b = CircuitBuilder(field)
    labels = labels or {}
    env = {v: b.input(labels.get(v, v)) for v in free_vars(matrix)}
    out = _BoolCircuits(b).encode(matrix, env, {})
    return b.build(out)


# -- the reduction -----------------------------------------------------------------

@dataclass(frozen=True)
class ReductionOutput:
    system: RecSystem
    init: Numeric
    main: int
    sequence_map: Dict[str, str]
    variable_map: Dict[str, str]
    horizon: int

    @property
    def k(self) -> int:
        return (self.system.k - 1) // 3

    def metadata(self) -> dict:
        return {
            "k": self.k,
            "horizon": self.horizon,
            "sequence_map": dict(self.sequence_map),
            "variable_map": dict(self.variable_map),
        }


def compile_qbf(f: QbfFormula, field: Field = QQ) -> ReductionOutput:
    """Extended polyrec system whose main column is nonzero iff f is true."""
    k = f.k
    if k < 1:
        raise ValueError("the reduction needs at least one quantified variable")
    c = [f"c{i}" for i in range(1, k + 1)]
    d = [f"d{i}" for i in range(0, k + 1)]
    fm = [f"f{i}" for i in range(0, k)]
    names = c + d + fm
    # prefix position j (0 = outermost) is driven by counter c^(k-j)
    var_of_c = {i: f.prefix[k - i] for i in range(1, k + 1)}

    def circuit(build) -> Circuit:
        b = CircuitBuilder(field)
        bc = _BoolCircuits(b)
        return b.build(build(b, bc))

    def old(b, name):
        return b.input(name)

    def new(b, name):
        return b.input(next_name(name))

    def not_(bc, a):
        return bc.one_minus(a)

    def or_(b, bc, a, c2):
        return bc.one_minus(b.mul(bc.one_minus(a), bc.one_minus(c2)))

    updates: List[Circuit] = []
    # c^1 flips every step
    updates.append(circuit(lambda b, bc: not_(bc, old(b, c[0]))))
    for i in range(2, k + 1):
        def q_update(b, bc, i=i):
            x, y, z = old(b, c[i - 1]), old(b, c[i - 2]), new(b, c[i - 2])
            left = b.mul(not_(bc, x), b.mul(y, not_(bc, z)))
            right = b.mul(x, or_(b, bc, not_(bc, y), z))
            return or_(b, bc, left, right)

        updates.append(circuit(q_update))

    def d0(b, bc):
        env = {var_of_c[i][1]: old(b, c[i - 1]) for i in range(1, k + 1)}
        return bc.encode(f.matrix, env, {})

    updates.append(circuit(d0))
    for i in range(1, k + 1):
        def s_update(b, bc, i=i):
            x, y = new(b, d[i - 1]), old(b, fm[i - 1])
            z, t = old(b, c[i - 1]), new(b, c[i - 1])
            comb = or_(b, bc, x, y) if var_of_c[i][0] == EXISTS else b.mul(x, y)
            return b.mul(comb, b.mul(z, not_(bc, t)))

        updates.append(circuit(s_update))
    for i in range(1, k + 1):
        def r_update(b, bc, i=i):
            x, y = old(b, c[i - 1]), new(b, c[i - 1])
            z, t = new(b, d[i - 1]), old(b, fm[i - 1])
            store = b.mul(z, b.mul(not_(bc, x), y))
            same = or_(b, bc, b.mul(x, y), b.mul(not_(bc, x), not_(bc, y)))
            return or_(b, bc, store, b.mul(t, same))

        updates.append(circuit(r_update))

    main = names.index(d[k])
    system = RecSystem(field, tuple(names), tuple(updates), True, main)
    seq_map = {}
    for i in range(1, k + 1):
        seq_map[c[i - 1]] = f"c^{i}"
    for i in range(0, k + 1):
        seq_map[d[i]] = f"d^{i}"
    for i in range(0, k):
        seq_map[fm[i]] = f"f^{i}"
    var_map = {c[i - 1]: var_of_c[i][1] for i in range(1, k + 1)}
    init = Numeric(tuple(field.zero for _ in names))
    return ReductionOutput(system, init, main, seq_map, var_map, 2 ** k + 1)


def reduction_size(out: ReductionOutput) -> int:
    """Total gate count of the fused system."""
    fused = out.system.fused()
    return circuit_stats(Circuit(fused.field, fused.updates[0].gates, tuple(u.outputs[0] for u in fused.updates)))["size"]


@dataclass(frozen=True)
class ValidityCheck:
    valid: bool
    oracle_agrees: Optional[bool] = None

    def to_json(self) -> dict:
        return {"valid": self.valid, "oracle_agrees": self.oracle_agrees}


def check_validity_via_sequence(f: QbfFormula, field: Field = QQ, *, oracle: bool = True) -> ValidityCheck:
    """Compile, fuse, run 2^k + 1 steps and read the main column."""
    out = compile_qbf(f, field)
    sys = out.system.fused()
    rows = evaluate(sys, out.init, out.horizon)
    valid = any(r[out.main] for r in rows)
    agrees = (brute_force_qbf(f) == valid) if oracle else None
    return ValidityCheck(valid, agrees)
