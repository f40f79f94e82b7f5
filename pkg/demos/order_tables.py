import math

from psi_approx import LogPower, Power, order_table
from psi_approx.bounds_report import parse_n_list

for name, psi, ns in [("C2", LogPower(2, 1, K=math.exp(2) - 1), "16..4096"),
                      ("C4", Power(2), "4..256"),
                      ("T5", LogPower(1, 2), "16..4096")]:
    t = order_table(name, psi, parse_n_list(ns))
    print(f"{name}  band={t.band:.3f}  growth={t.growth:.3f}  {t.verdict}")
    for n, lhs, rhs, ratio in t.rows:
        print(f"   {n:6d} {lhs:.4e} {rhs:.4e} {ratio:.4f}")
