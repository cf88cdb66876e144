"""Command-line entry point: ``python -m ratrec <command> ...``.

Exit codes: 0 success, 1 semantic negative (nonzero sequence, invalid
formula, no zero found), 2 input or format error, 3 resource limit, bound
exceeded or division by zero.
"""
from __future__ import annotations

import argparse
import sys as _sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

from .algebra.fields import Field, QQ
from .errors import (
    BoundExceeded,
    DivisionByZeroEvent,
    FieldMismatch,
    ParseError,
    RatrecError,
    ResourceLimit,
)
from .flatten import flatten
from .io import (
    dumps,
    load_json,
    precursive_from_json,
    system_from_json,
    system_to_json,
)
from .qbf import check_validity_via_sequence, compile_qbf, parse_qbf
from .recsys import (
    Numeric,
    Symbolic,
    SymbolicCustom,
    degree_profile,
    evaluate,
    from_precursive,
    symbolic_evaluate,
)
from .zeroness import (
    AllZeroUpTo,
    NonZero,
    Zero,
    counterexample_custom_init,
    counterexample_system,
    prefix_zero_check,
    skolem_search,
    zeroness_finite_field,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, payload: Optional[dict] = None, message: str = ""):
        self.code = code
        self.payload = payload
        self.message = message


def _field_flag(text: str) -> Field:
    try:
        return Field.from_flag(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def _load_system(path, field: Field | None = None):
    return system_from_json(load_json(path), field)


def _need_numeric(init):
    if not isinstance(init, Numeric):
        raise _Exit(EXIT_INPUT, message="this command needs a numeric initial condition")
    return init


def _emit(args, payload: dict) -> None:
    text = dumps(payload)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        _sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------

def cmd_eval(args) -> int:
    sys, init = _load_system(args.system, args.field)
    init = _need_numeric(init)
    rows = evaluate(sys, init, args.steps)
    f = sys.field
    _emit(args, {
        "names": list(sys.names),
        "main": sys.names[sys.main],
        "main_column": [f.format(r[sys.main]) for r in rows],
        "rows": [[f.format(v) for v in r] for r in rows],
    })
    return EXIT_OK


def cmd_symbolic(args) -> int:
    sys, init = _load_system(args.system)
    if not isinstance(init, (Symbolic, SymbolicCustom)):
        init = Symbolic()
    trace = symbolic_evaluate(sys, init, args.steps, max_terms=args.max_terms)
    prof = degree_profile(trace, sys.k, sys.degree if isinstance(init, Symbolic) else None)
    _emit(args, {
        "variables": list(trace.ring.names),
        "names": list(sys.names),
        "rows": [[f.to_str() for f in row] for row in trace.rows],
        "degree_profile": [
            {"n": r.n, "d_n": r.d_n, "bound": r.bound, "ok": r.ok} for r in prof
        ],
    })
    return EXIT_OK


def cmd_flatten(args) -> int:
    sys, init = _load_system(args.system)
    if not isinstance(init, (Symbolic, SymbolicCustom)):
        init = Symbolic()
    res = flatten(sys, init, depth_limit=args.depth_limit, seed=args.seed)
    _emit(args, res.to_json())
    return EXIT_OK if res.verified else EXIT_NEGATIVE


def cmd_zeroness(args) -> int:
    sys, init = _load_system(args.system, args.field)
    init = _need_numeric(init)
    if args.mode == "finite":
        verdict = zeroness_finite_field(sys, init)
    else:
        verdict = prefix_zero_check(sys, init, args.bound)
    _emit(args, verdict.to_json())
    if isinstance(verdict, (Zero, AllZeroUpTo)):
        return EXIT_OK
    if isinstance(verdict, NonZero):
        return EXIT_NEGATIVE
    return EXIT_LIMIT


def cmd_skolem(args) -> int:
    sys, init = _load_system(args.system, args.field)
    init = _need_numeric(init)
    hit = skolem_search(sys, init, args.bound)
    if hit is None:
        _emit(args, {"found": False, "bound": args.bound})
        return EXIT_NEGATIVE
    _emit(args, {"found": True, "n": hit.n})
    return EXIT_OK


def _read_formula(path):
    try:
        return parse_qbf(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_qbf_compile(args) -> int:
    formula = _read_formula(args.formula)
    out = compile_qbf(formula, args.field or QQ)
    obj = system_to_json(out.system, out.init)
    obj["metadata"] = out.metadata()
    _emit(args, obj)
    return EXIT_OK


def _check_one(path: str, field_flag: str, oracle: bool) -> dict:
    formula = _read_formula(path)
    res = check_validity_via_sequence(formula, Field.from_flag(field_flag), oracle=oracle)
    return res.to_json()


def cmd_qbf_check(args) -> int:
    flag = args.field_flag or "q"
    if len(args.formula) == 1:
        res = _check_one(args.formula[0], flag, args.oracle)
        _emit(args, res)
        return EXIT_OK if res["valid"] else EXIT_NEGATIVE
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, args.formula, [flag] * len(args.formula), [args.oracle] * len(args.formula)))
    else:
        results = [_check_one(p, flag, args.oracle) for p in args.formula]
    items = [{"formula": p, **r} for p, r in zip(args.formula, results)]
    _emit(args, {"results": items})
    return EXIT_NEGATIVE if any(r["oracle_agrees"] is False for r in results) else EXIT_OK


def cmd_convert_prec(args) -> int:
    rec = precursive_from_json(load_json(args.input))
    sys, init = from_precursive(rec)
    _emit(args, system_to_json(sys, init))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    if args.d < 1:
        raise _Exit(EXIT_INPUT, message="--d must be at least 1")
    sys, init = counterexample_system(args.d)
    if args.symbolic:
        init = counterexample_custom_init(args.d)
    _emit(args, system_to_json(sys, init))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratrec", description="Exact computations with rationally recursive sequences.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized pre-checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write the JSON result here instead of stdout")
        return sp

    sp = add("eval", cmd_eval, "numeric trajectory")
    sp.add_argument("--system", required=True)
    sp.add_argument("--steps", type=_nonneg, required=True)
    sp.add_argument("--field", type=_field_flag)

    sp = add("symbolic", cmd_symbolic, "symbolic trace and degree profile")
    sp.add_argument("--system", required=True)
    sp.add_argument("--steps", type=_nonneg, required=True)
    sp.add_argument("--max-terms", type=int, default=None)

    sp = add("flatten", cmd_flatten, "extract a simple recursion")
    sp.add_argument("--system", required=True)
    sp.add_argument("--depth-limit", type=_nonneg, default=None)

    sp = add("zeroness", cmd_zeroness, "zeroness probes")
    sp.add_argument("--system", required=True)
    sp.add_argument("--mode", choices=["finite", "prefix"], required=True)
    sp.add_argument("--bound", type=_nonneg, default=None)
    sp.add_argument("--field", type=_field_flag)

    sp = add("skolem", cmd_skolem, "bounded search for a zero")
    sp.add_argument("--system", required=True)
    sp.add_argument("--bound", type=_nonneg, required=True)
    sp.add_argument("--field", type=_field_flag)

    sp = add("qbf-compile", cmd_qbf_compile, "compile a QBF into an extended system")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--field", type=_field_flag, default=None)

    sp = add("qbf-check", cmd_qbf_check, "decide QBF validity through the compiled sequence")
    sp.add_argument("--formula", required=True, nargs="+")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--field", dest="field_flag", default=None, help="q, f2 or fp:P")

    sp = add("convert-prec", cmd_convert_prec, "P-recurrence to ratrec system")
    sp.add_argument("--input", required=True)

    sp = add("counterexample", cmd_counterexample, "the falling-factorial system")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--symbolic", action="store_true", help="use the custom symbolic start u0 = P(x), v0 = x")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "field_flag", None) is not None:
        try:
            Field.from_flag(args.field_flag)
        except ValueError as exc:
            parser.error(str(exc))
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.payload is not None:
            _emit(args, exc.payload)
        if exc.message:
            print(f"error: {exc.message}", file=_sys.stderr)
        return exc.code
    except DivisionByZeroEvent as exc:
        _emit(args, {"error": "division_by_zero", "step": exc.step, "equation": exc.equation})
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_LIMIT
    except (ResourceLimit, BoundExceeded) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_LIMIT
    except (ParseError, FieldMismatch, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT
    except RatrecError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
