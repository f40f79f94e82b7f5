"""The ``default`` verification suite run by ``psi-approx verify``.

Each check returns a :class:`CheckResult`; theorem sandwiches additionally
contribute their full :class:`~psi_approx.bounds_report.BoundsReport`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .approx_engine import best_orth_approx
from .bounds_report import (
    BoundsReport,
    constants_K,
    cutoff_A,
    lemma_tail_check,
    order_table,
    parse_n_list,
    sandwich_check,
)
from .psi_families import LogLogPower, LogPower, Power, phi_s, phi_s_inverse
from .trig_core import (
    GridSpec,
    TrigPoly,
    lp_norm,
    parseval_l2,
    psi_beta_derivative,
    psi_beta_integral,
    vallee_poussin,
)


@dataclass
class CheckResult:
    criterion: int
    name: str
    verdict: str
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "verdict": self.verdict,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _verdict(ok: bool) -> str:
    return "Pass" if ok else "Fail"


def random_real_poly(rng: np.random.Generator, degree: int, mean_zero: bool = False) -> TrigPoly:
    """Conjugate-symmetric polynomial with Gaussian coefficients up to ``degree``."""
    c = rng.normal(size=degree) + 1j * rng.normal(size=degree)
    d = {k: c[k - 1] for k in range(1, degree + 1)}
    d.update({-k: np.conj(v) for k, v in list(d.items())})
    if not mean_zero:
        d[0] = rng.normal()
    return TrigPoly(d)


def check_vallee_poussin(max_m: int = 64, points: int = 8192) -> CheckResult:
    grid = GridSpec(points)
    norms = [lp_norm(vallee_poussin(m), 1, grid) for m in range(1, max_m + 1)]
    worst = max(norms)
    return CheckResult(1, "Vallee-Poussin L1 bound", _verdict(worst <= 3 * math.pi + 1e-6),
                       detail={"max_norm": worst, "bound": 3 * math.pi})


def check_parseval(cases: int = 200, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        f = random_real_poly(rng, int(rng.integers(1, 65)))
        exact = parseval_l2(f)
        worst = max(worst, abs(lp_norm(f, 2) - exact) / exact)
    return CheckResult(2, "Parseval agreement", _verdict(worst <= 1e-9),
                       detail={"cases": cases, "max_rel_diff": worst})


def random_sparse_poly(rng: np.random.Generator, size: int, span: int = 20) -> TrigPoly:
    ks = rng.choice(np.arange(-span, span + 1), size=size, replace=False)
    cs = rng.normal(size=size) + 1j * rng.normal(size=size)
    return TrigPoly(zip(ks.tolist(), cs.tolist()))


def check_greedy_optimality(cases: int = 600, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        f = random_sparse_poly(rng, int(rng.integers(1, 13)))
        m = int(rng.integers(0, 7))
        g = best_orth_approx(f, m, 2, "Greedy").error
        e = best_orth_approx(f, m, 2, "Exhaustive").error
        worst = max(worst, abs(g - e))
    return CheckResult(3, "Greedy = Exhaustive at s = 2", _verdict(worst <= 1e-12),
                       detail={"cases": cases, "max_abs_diff": worst})


def _sandwich_block(criterion, name, cases, extra_ok=True, detail=None) -> CheckResult:
    reports = [sandwich_check(*c) for c in cases]
    ok = extra_ok and all(r.verdict == "Pass" for r in reports)
    d = {"cases": len(reports), "verdicts": [r.verdict for r in reports]}
    d.update(detail or {})
    return CheckResult(criterion, name, _verdict(ok), detail=d, reports=reports)


def check_theorem1() -> CheckResult:
    psi = Power(0.75)
    K1, K2 = constants_K(psi, 2)
    ok = abs(K1 - 9.694e-4) < 5e-7 and abs(K2 - 54.72) < 5e-3
    cases = [("T1", psi, b, 2, n) for b in (0, 0.5, 1) for n in (2, 4, 8)]
    return _sandwich_block(4, "T1 sandwich", cases, ok, {"K1": K1, "K2": K2})


def check_theorem2() -> CheckResult:
    psi = Power(0.75)
    ok = all(cutoff_A(psi, 2, 8, n) == 4 * 64 * n + 2 * n for n in (2, 4))
    cases = [("T2", psi, b, 2, n) for b in (0, 0.5, 1) for n in (2, 4)]
    return _sandwich_block(5, "T2 sandwich", cases, ok)


def check_theorems34() -> CheckResult:
    psi = Power(2)
    cases = [("T3", psi, 0, 1, n) for n in (2, 4, 8)] + [("T4", psi, 1, 1, n) for n in (2, 4, 8)]
    return _sandwich_block(6, "T3/T4 sandwich", cases)


def lemma_cases():
    """(psi, s, two_sided) triples covered by the lemma suite."""
    out = []
    for r, s in ((0.75, 2.0), (1.0, 2.0), (1.5, 2.0), (0.9, 1.5), (0.8, 3.0)):
        out.append((Power(r), s, True))
    out.append((LogPower(2, 1), 2.0, False))
    out.append((LogLogPower(2, 0.5, 1), 2.0, False))
    for r in (1.5, 2.0, 3.0):
        out.append((Power(r), 1.0, True))
    out.append((LogPower(1, 2), 1.0, False))
    out.append((LogLogPower(1, 1, 2), 1.0, False))
    return out


def check_lemmas(max_n: int = 64) -> CheckResult:
    failures = []
    count = 0
    for psi, s, two in lemma_cases():
        for n in range(1, max_n + 1):
            c = lemma_tail_check(psi, s, n, two_sided=two)
            count += 1
            if not c.ok:
                failures.append((str(psi), s, n))
    return CheckResult(7, "Lemma inequalities", _verdict(not failures),
                       detail={"checks": count, "failures": failures[:10]})


def check_order_tables() -> CheckResult:
    c2 = order_table("C2", LogPower(2, 1), parse_n_list("16..4096"))
    c4 = order_table("C4", Power(2), parse_n_list("4..256"))
    t5 = order_table("T5", LogPower(1, 2), parse_n_list("16..4096"))
    ok = c2.band < 2 and c4.band < 2 and t5.growth >= 2 and c2.verdict == c4.verdict == t5.verdict == "Pass"
    return CheckResult(8, "Order tables", _verdict(ok),
                       detail={"C2_band": c2.band, "C4_band": c4.band, "T5_growth": t5.growth})


def check_round_trips(cases: int = 100, seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    fams = [Power(0.75), Power(2), LogPower(2, 1), LogPower(1, 2), LogLogPower(2, 0.5, 1)]
    for i in range(cases):
        f = random_real_poly(rng, int(rng.integers(1, 32)), mean_zero=True)
        psi = fams[i % len(fams)]
        beta = float(rng.choice([0.0, 0.5, 1.0, 1.3, 2.0]))
        back = psi_beta_derivative(psi_beta_integral(f, psi, beta), psi, beta)
        worst = max(worst, max(abs(back.coeff(k) - c) / abs(c) for k, c in f.items()))
    inv = 0.0
    for psi, s in ((Power(0.75), 2.0), (LogPower(2, 1), 2.0), (LogPower(1, 2), 1.0), (Power(2), 1.0),
                   (LogLogPower(2, 0.5, 1), 2.0)):
        for x in np.geomspace(1.0, 1e8, 17):
            y = phi_s(psi, s, float(x))
            inv = max(inv, float(abs(phi_s_inverse(psi, s, y) - x) / x))
    return CheckResult(9, "Round trips", _verdict(worst <= 1e-14 and inv <= 1e-8),
                       detail={"multiplier_max_rel": worst, "phi_inverse_max_rel": inv})


DEFAULT_SUITE = (
    check_vallee_poussin,
    check_parseval,
    check_greedy_optimality,
    check_theorem1,
    check_theorem2,
    check_theorems34,
    check_lemmas,
    check_order_tables,
    check_round_trips,
)


def run_suite(name: str = "default") -> dict:
    """Run every check of the suite; the result is the JSON report body."""
    if name != "default":
        raise ValueError(f"unknown suite {name!r}")
    results: list[CheckResult] = []
    reports: list[BoundsReport] = []
    for check in DEFAULT_SUITE:
        t0 = time.perf_counter()
        res = check()
        res.seconds = time.perf_counter() - t0
        results.append(res)
        reports += res.reports
    verdict = "Pass" if all(r.verdict == "Pass" for r in results) else "Fail"
    return {
        "suite": name,
        "verdict": verdict,
        "criteria": [r.to_json() for r in results],
        "reports": [r.to_json() for r in reports],
    }
