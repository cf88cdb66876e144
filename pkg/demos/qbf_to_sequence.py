"""Decide small QBFs by compiling them into a recursive sequence.

The compiled system has 3k+1 sequences for k quantified variables; the formula
is true exactly when the main sequence is nonzero at index 2^k.
"""
from ratrec import GF2, QQ, brute_force_qbf, check_validity_via_sequence, compile_qbf, parse_qbf
from ratrec.recsys import evaluate, main_column

for text in ("exists a; forall b; a | b", "exists a; forall b; a & b",
             "forall a; exists b; (a | b) & (!a | !b)"):
    f = parse_qbf(text)
    out = compile_qbf(f, GF2)
    col = main_column(evaluate(out.system, out.init, out.horizon), out.system)
    print(text)
    print(f"  {out.system.k} sequences, main column over F2: {[int(v) for v in col]}")
    for field in (GF2, QQ):
        r = check_validity_via_sequence(f, field, oracle=False)
        print(f"  valid over {field}: {r.valid}  (brute force: {brute_force_qbf(f)})")
