# Measured best approximations against the two-sided theorem bounds.
import json

from psi_approx import Power, sandwich_check

psi = Power(0.75)
for n in (2, 4, 8):
    r = sandwich_check("T1", psi, 0.5, 2, n)
    lo, hi = r.measured
    print(f"n={n}: {r.lower:.3e} <= [{lo:.3e}, {hi:.3e}] <= {r.upper:.3e}  {r.verdict}")

r = sandwich_check("T3", Power(2), 0, 1, 4)
print(json.dumps(r.to_json(), indent=2))
