"""Watch the field chain of the squares system stabilise, then flatten it.

The system is x1' = x1^2 + x2^2, x2' = x1*x2 with main variable x1.
"""
from ratrec import chain_report, parse_expr, subfield_membership, symbolic_evaluate, Symbolic
from ratrec.flatten import flatten
from ratrec.recsys import squares_chain_system

sys = squares_chain_system()
tr = symbolic_evaluate(sys, Symbolic(), 3)
for n, f in enumerate(tr.column(sys.main)):
    print(f"F_{n} = {f.to_str()}")

rep = chain_report(tr)
print("trdeg of Q(F_0..F_n):", list(rep.trdegs))

r = tr.ring
x1, x2 = parse_expr("x1", r), parse_expr("x2", r)
hit = subfield_membership(parse_expr("x1*x2", r), [x1, x2 * x2])
print("x1*x2 in Q(x1, x2^2)?", "yes" if hit is not None else "no")

res = flatten(sys)
print(f"m = {res.m}, bound = {res.bound_used}, verified = {res.verified}")
print("u(n+m+1) = R(u(n), .., u(n+m)) with R =", res.R.to_str())
