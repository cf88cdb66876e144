"""A sequence that is zero for a long time and then is not.

The prefix heuristic inspects a bounded number of terms; the family below
keeps u_0..u_{d-1} at zero and then produces u_d = d!.
"""
import math

from ratrec.recsys import evaluate, main_column
from ratrec.zeroness import counterexample_system, prefix_bound, prefix_zero_check

for d in (3, 10, 100):
    sys, init = counterexample_system(d)
    col = main_column(evaluate(sys, init, d), sys)
    verdict = prefix_zero_check(sys, init)
    print(f"d={d:3d}  inspected {prefix_bound(sys):3d} terms -> {verdict}")
    print(f"       first nonzero index {col.index(next(v for v in col if v))}, value == d! : {col[d] == math.factorial(d)}")
