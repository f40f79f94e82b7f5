"""Elasticity bounds and class membership for a few weights."""
import math

from psi_approx import LogLogPower, LogPower, Power, alpha_inf, alpha_sup, classify, weighted

weights = [Power(0.75), Power(2), LogPower(2, 1, K=math.exp(2) - 1), LogPower(1, 2), LogLogPower(2, 0.5, 1)]

for psi in weights:
    g = weighted(psi, 2)
    res = classify(g)
    print(f"{str(psi):40s} alpha in [{alpha_inf(g, 1):.4f}, {alpha_sup(g, 1):.4f}]  -> {res.verdict}")
