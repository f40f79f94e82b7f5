"""Best m-term approximation of a small polynomial under several metrics."""
import math

from psi_approx import TrigPoly, best_orth_approx

f = TrigPoly.from_cosines({1: 1.0, 2: 0.5, 5: 0.25, 9: 0.125})

for s in (1.5, 2.0, 4.0, math.inf):
    for m in (0, 2, 4, 6):
        res = best_orth_approx(f, m, s, "Exhaustive")
        print(f"s={s:>4} m={m}: error {res.error:.6f}  keeps {sorted(res.chosen)}")

# at s = 2 the greedy choice is already optimal
print(best_orth_approx(f, 4, 2, "Greedy").error, best_orth_approx(f, 4, 2, "Exhaustive").error)
