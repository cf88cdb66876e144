"""Catalan numbers and factorials as rational / polynomial recursive systems.

Run with ``python demos/catalan_and_factorial.py``.
"""
from ratrec import PRecurrence, from_precursive, simple_evaluate
from ratrec.recsys import catalan_system, evaluate, factorial_simple, factorial_system, main_column

# Catalan numbers need a division, so the system is rational.
sys, init = catalan_system()
print("system:")
for name, upd in zip(sys.names, sys.updates):
    print(f"  {name}' = {upd.to_str()}")
print("C_0..C_15:", main_column(evaluate(sys, init, 15), sys))

# Factorials three ways: polynomial system, simple one-variable recursion,
# and the conversion of the P-recurrence u(n+1) = (n+1) u(n).
sys, init = factorial_system()
a = main_column(evaluate(sys, init, 10), sys)
b = simple_evaluate(factorial_simple(), 10)
rec = PRecurrence.from_exprs(["-(n+1)", "1"], [1])
c = main_column(evaluate(*from_precursive(rec), 10), from_precursive(rec)[0])
print("n! (system):   ", a)
print("n! (simple):   ", b)
print("n! (P-rec):    ", c)
assert a == b == c
