"""Explicit constants, two-sided theorem bounds, sandwich checks and order tables.

The class quantities ``e_{2n}(L^psi_{beta,p})_s`` cannot be measured directly.
A sandwich check instead builds the theorem's extremal function, confirms it
lies in the class, measures its own ``e_{2n}`` and asserts

    dual lower bound  <=  measured  <=  proven class upper bound.

Theorem labels:

``T1``  ``L_{beta,p}`` in the sup norm, scale ``(sum psi^{p'} k^{p'-2})^{1/p'}``
``T2``  ``L_{beta,1}`` in ``L_s``, scale ``(sum psi^s k^{s-2})^{1/s}``
``T3``  ``L_{beta,1}`` in the sup norm when ``cos(beta pi/2) != 0``, scale ``sum psi``
``T4``  the same when ``cos(beta pi/2) = 0``, scale ``psi(n) n``
``T5``  dispatches to T3 or T4 on ``cos(beta pi/2)``
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .approx_engine import best_orth_approx, dual_lower_bound
from .errors import (
    AdmissibilityError,
    DivergenceError,
    DomainError,
    HypothesisError,
    PsiApproxError,
    RangeError,
    TruncationError,
)
from .extremal_functions import (
    ClassSpec,
    extremal_fm,
    extremal_fn_star,
    extremal_fp,
    fp_dropped_sup,
    fp_lambda,
    verify_membership,
)
from .psi_families import (
    PsiFunction,
    alpha_inf,
    alpha_sup,
    classify,
    conjugate_exponent,
    cutoff_A,
    cutoff_D,
    phi_s,
    tail_sum,
    weighted,
)
from .trig_core import GridSpec, quarter_phase

THEOREMS = ("T1", "T2", "T3", "T4", "T5")
COROLLARIES = ("C1a", "C1b", "C2", "C3", "C4", "C5", "C6", "T5")
VERDICTS = ("Pass", "Fail", "Inconclusive")

# alpha_1(g) = 1 exactly (e.g. psi = t^-2) is accepted for T3/T4; the lower
# constant then vanishes and the bound degenerates to 0 instead of failing
_ALPHA_EDGE = 1e-9


def xi(s: float) -> float:
    """``max{4 (pi/(s-1))^(1/s), 14 (8 pi)^(1/s) s}`` for ``s > 1``."""
    s = float(s)
    if not s > 1:
        raise DomainError(f"xi needs s > 1, got {s}")
    if math.isinf(s):
        raise DomainError("xi needs a finite s")
    return max(4.0 * (math.pi / (s - 1.0)) ** (1.0 / s), 14.0 * (8.0 * math.pi) ** (1.0 / s) * s)


def cos_quarter(beta: float) -> float:
    """``cos(beta pi / 2)``, exactly zero for odd integer beta."""
    return quarter_phase(beta, 1).real


def _series_converges(psi: PsiFunction, s: float) -> bool:
    try:
        tail_sum(psi, s, 1)
    except DivergenceError:
        return False
    return True


def constants_K(psi: PsiFunction, p: float) -> tuple[float, float]:
    """``(K1, K2)`` for ``1 < p < inf``; needs ``alpha_1(g_p) > p'``."""
    p = float(p)
    if not 1 < p < math.inf:
        raise DomainError(f"constants_K needs 1 < p < inf, got {p}")
    pc = conjugate_exponent(p)
    g = weighted(psi, p)
    verdict = classify(g).verdict
    if verdict not in ("M0", "MC"):
        raise HypothesisError(f"g_p = psi t^(1/{p:g}) is not in M0 (classified {verdict})")
    a = alpha_inf(g, 1)
    if not a > pc:
        raise HypothesisError(f"alpha_1(g_p) = {a:.6g} is not > p' = {pc:.6g}")
    K1 = (1.0 / (3.0 * xi(p))) * (a / (pc + a)) ** (1.0 / p) * (1.0 - pc / a)
    K2 = (1.0 / math.pi) * xi(pc) * ((pc + a) / a) ** (1.0 / pc)
    return K1, K2


def check_hypotheses(theorem: str, psi: PsiFunction, beta: float, p_or_s: float) -> dict:
    """Check a theorem's hypotheses; returns the measured quantities.

    Raises :class:`HypothesisError` naming the first inequality that fails.
    ``T5`` is resolved to T3 or T4 first.
    """
    theorem = resolve_theorem(theorem, beta)
    info: dict = {"theorem": theorem, "notes": []}
    if theorem in ("T1", "T2"):
        e = float(p_or_s)
        if not 1 < e < math.inf:
            raise HypothesisError(f"{theorem} needs 1 < {'p' if theorem == 'T1' else 's'} < inf, got {e}")
        ec = conjugate_exponent(e)
        # T1 weights psi by t^(1/p) and sums with exponent p'; T2 is the same with p = s'
        q, s_sum = (e, ec) if theorem == "T1" else (ec, e)
        if not _series_converges(psi, s_sum):
            raise HypothesisError(f"sum psi^{s_sum:g}(k) k^{s_sum - 2:g} diverges")
        g = weighted(psi, q)
        verdict = classify(g).verdict
        if verdict not in ("M0", "MC"):
            raise HypothesisError(f"psi t^(1/{q:g}) is not in M0 (classified {verdict})")
        a = alpha_inf(g, 1)
        if not a > s_sum:
            raise HypothesisError(f"alpha_1 = {a:.6g} is not > {s_sum:.6g}")
        info.update(alpha1=a, q=q, sum_exponent=s_sum, verdict=verdict)
        return info
    if not _series_converges(psi, 1.0):
        raise HypothesisError("sum psi(k) diverges")
    g = weighted(psi, 1.0)
    verdict = classify(g).verdict
    if verdict not in ("M0", "MC"):
        raise HypothesisError(f"g = psi(t) t is not in M0 (classified {verdict})")
    a = alpha_inf(g, 1)
    if a < 1.0 - _ALPHA_EDGE:
        raise HypothesisError(f"alpha_1(g) = {a:.6g} is not > 1")
    if a <= 1.0 + _ALPHA_EDGE:
        info["notes"].append("alpha_1(g) = 1 sits on the boundary; the lower constant vanishes")
    c = cos_quarter(beta)
    if theorem == "T3" and c == 0:
        raise HypothesisError("T3 needs cos(beta pi/2) != 0")
    if theorem == "T4" and c != 0:
        raise HypothesisError("T4 needs cos(beta pi/2) = 0")
    info.update(alpha1=a, verdict=verdict, cos=c)
    return info


def resolve_theorem(theorem: str, beta: float) -> str:
    theorem = str(theorem).upper()
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    if theorem == "T5":
        return "T4" if cos_quarter(beta) == 0 else "T3"
    return theorem


def theorem_bounds(theorem: str, psi: PsiFunction, beta: float, p_or_s: float, n: int) -> tuple[float, float]:
    """Proven ``(lower, upper)`` bounds for ``e_{2n}`` of the class."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    info = check_hypotheses(theorem, psi, beta, p_or_s)
    theorem = info["theorem"]
    if theorem == "T1":
        p = float(p_or_s)
        K1, K2 = constants_K(psi, p)
        root = tail_sum(psi, conjugate_exponent(p), n).value ** (1.0 / conjugate_exponent(p))
        return K1 * root, K2 * root
    if theorem == "T2":
        s = float(p_or_s)
        K1, K2 = constants_K(psi, conjugate_exponent(s))
        root = tail_sum(psi, s, n).value ** (1.0 / s)
        return 4.0 / 3.0 * K1 * root, K2 * root
    a = info["alpha1"]
    shrink = max(0.0, 1.0 - 1.0 / a)
    if theorem == "T3":
        S = tail_sum(psi, 1.0, n).value
        return abs(info["cos"]) / (12.0 * math.pi) * shrink * S, S / math.pi
    g = float(psi(float(n))) * n
    return shrink * g / (60.0 * math.pi), (1.0 + 2.0 / math.pi) * g


# -- sandwich --------------------------------------------------------------------


@dataclass(frozen=True)
class SandwichConfig:
    """Knobs for :func:`sandwich_check`.

    ``l`` is the preferred cutoff parameter; for T2/T3 it is lowered until the
    extremal polynomial has degree at most ``max_degree``.  ``fp_trunc`` is the
    truncation of ``f*_p`` for T1, whose dropped mass is carried as a budget.
    """

    l: int = 8
    rel_tol: float = 1e-4
    max_degree: int = 1 << 16
    fp_trunc: int = 1 << 14
    grid: GridSpec = field(default_factory=GridSpec)


DEFAULT_CONFIG = SandwichConfig()


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


@dataclass
class BoundsReport:
    theorem: str
    params: dict
    lower: float
    upper: float
    measured: tuple[float, float]
    verdict: str
    budgets: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    theorem_lower: float | None = None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": {k: _num(v) for k, v in self.params.items()},
            "lower": _num(self.lower),
            "upper": _num(self.upper),
            "measured": [_num(self.measured[0]), _num(self.measured[1])],
            "verdict": self.verdict,
            "budgets": {k: _num(v) for k, v in self.budgets.items()},
            "notes": list(self.notes),
            "theorem_lower": None if self.theorem_lower is None else _num(self.theorem_lower),
        }


def _verdict(lower, upper, lo, hi, tol) -> str:
    tl, tu = tol * abs(lower), tol * abs(upper)
    if lo >= lower - tl and hi <= upper + tu:
        return "Pass"
    if hi < lower - tl or lo > upper + tu:
        return "Fail"
    return "Inconclusive"


def _pick_cutoff(cut, l_max: int, cap: int) -> tuple[int, int]:
    for l in range(int(l_max), 0, -1):
        try:
            m = cut(l)
        except RangeError:
            continue
        if 2 * m - 1 <= cap:
            return l, m
    raise TruncationError(f"even l = 1 gives an extremal polynomial above degree {cap}")


def sandwich_check(theorem: str, psi: PsiFunction, beta: float, p_or_s: float, n: int,
                   cfg: SandwichConfig = DEFAULT_CONFIG) -> BoundsReport:
    """Verify ``dual <= e_{2n}(extremal) <= theorem upper`` for one parameter set.

    Every failure, including violated hypotheses, yields a report with verdict
    ``Fail`` and a diagnostic note rather than an exception.
    """
    n = int(n)
    resolved = resolve_theorem(theorem, beta) if str(theorem).upper() in THEOREMS else str(theorem)
    params = {"psi": psi.to_json(), "beta": float(beta), "n": n}
    if resolved == "T1":
        params.update(p=float(p_or_s), s=math.inf)
    elif resolved == "T2":
        params.update(p=1.0, s=float(p_or_s))
    else:
        params.update(p=1.0, s=math.inf)
    report = BoundsReport(str(theorem).upper(), params, math.nan, math.nan, (math.nan, math.nan), "Fail",
                          {"rel_tol": cfg.rel_tol})
    try:
        info = check_hypotheses(theorem, psi, beta, p_or_s)
        report.notes += info["notes"]
        t_lower, upper = theorem_bounds(theorem, psi, beta, p_or_s, n)
        report.theorem_lower, report.upper = t_lower, upper
        lo, hi, lower = _measure(resolved, psi, beta, p_or_s, n, cfg, report)
    except (PsiApproxError, ValueError) as exc:
        report.notes.append(f"{type(exc).__name__}: {exc}")
        return report
    report.lower, report.measured = lower, (lo, hi)
    if not report.budgets.get("membership_ok", False):
        report.notes.append("extremal function failed the class-membership check")
        return report
    report.verdict = _verdict(lower, upper, lo, hi, cfg.rel_tol)
    report.notes.append(f"measured >= theorem lower bound: {lo >= t_lower}")
    return report


def _measure(theorem, psi, beta, p_or_s, n, cfg, report):
    b = report.budgets
    grid = cfg.grid
    if theorem == "T1":
        p = float(p_or_s)
        pc = conjugate_exponent(p)
        N = max(cfg.fp_trunc, 4 * n)
        f = extremal_fp(psi, p, n, n_trunc=N)
        norm, ok = verify_membership(f, ClassSpec(psi, beta, p), grid)
        res = best_orth_approx(f, 2 * n, math.inf, "SymmetricPairs", grid)
        dropped = fp_dropped_sup(psi, p, n, N)
        lo, hi = res.error_interval[0], res.error_interval[1] + dropped
        # nonnegative cosine residual: its sup is the value at t = 0
        T = tail_sum(psi, pc, n)
        exact = fp_lambda(psi, p, n) / T.value ** (1.0 / p) * tail_sum(psi, pc, 2 * n).value
        b.update(n_trunc=N, truncation=dropped, sup_gap=res.error_interval[1] - res.error_interval[0],
                 tail_sum_rel=T.error_bound / T.value, analytic_residual=exact)
        report.params["l"] = cfg.l
        lower = dual_lower_bound("T1", psi, beta, p, n, cfg.l)
    elif theorem == "T2":
        s = float(p_or_s)
        l, m = _pick_cutoff(lambda l: cutoff_A(psi, s, l, n), cfg.l, cfg.max_degree)
        f = extremal_fm(psi, beta, m)
        norm, ok = verify_membership(f, ClassSpec(psi, beta, 1.0), grid)
        strategy = "Greedy" if s == 2 else "SymmetricPairs"
        res = best_orth_approx(f, 2 * n, s, strategy, grid)
        lo, hi = res.error_interval
        b.update(m=m, strategy=strategy)
        report.params["l"] = l
        lower = dual_lower_bound("T2", psi, beta, s, n, l)
    elif theorem == "T3":
        l, m = _pick_cutoff(lambda l: cutoff_D(psi, l, n), cfg.l, cfg.max_degree)
        f = extremal_fm(psi, beta, m)
        norm, ok = verify_membership(f, ClassSpec(psi, beta, 1.0), grid)
        res = best_orth_approx(f, 2 * n, math.inf, "SymmetricPairs", grid)
        lo, hi = res.error_interval
        b.update(m=m, sup_gap=hi - lo)
        report.params["l"] = l
        lower = dual_lower_bound("T3", psi, beta, 1.0, n, l)
    else:
        f = extremal_fn_star(psi, n)
        norm, ok = verify_membership(f, ClassSpec(psi, beta, 1.0), grid)
        res = best_orth_approx(f, 2 * n, math.inf, "SymmetricPairs", grid)
        lo, hi = res.error_interval
        b.update(sup_gap=hi - lo)
        lower = dual_lower_bound("T4", psi, beta, 1.0, n)
    b.update(membership_norm=norm, membership_ok=ok)
    return lo, hi, lower


# -- lemma checks ----------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    n: int
    value: float
    lower: float | None
    upper: float
    ok: bool


def lemma_tail_check(psi: PsiFunction, s: float, n: int, two_sided: bool = False,
                     slack: float = 1e-9) -> LemmaCheck:
    """``psi^s(n) n^(s-1)`` against its bounds by the tail ``sum_{k>=n} psi^s k^{s-2}``.

    With ``s = 1`` this is the ``psi(n) n`` versus ``sum psi`` form, with the
    weight ``g = psi t``; otherwise the weight is ``g_{s'}``.  The upper bound
    is ``(s / a_n) T``; the lower bound, for M_C weights, is
    ``(s / A_n) (n a_n / (s + n a_n)) T`` with ``a_n, A_n`` the inf and sup of
    alpha over ``t >= n``.
    """
    s = float(s)
    n = int(n)
    g = weighted(psi, 1.0 if s == 1 else conjugate_exponent(s))
    a = alpha_inf(g, n)
    T = tail_sum(psi, s, n)
    power_of_n = 1.0 if s == 1 else s - 1.0
    value = float(np.exp(s * psi.log_value(float(n)) + power_of_n * math.log(n)))
    upper = s / a * T.high
    ok = value <= upper + slack
    lower = None
    if two_sided:
        A = alpha_sup(g, n)
        lower = s / A * (n * a / (s + n * a)) * T.low
        ok = ok and lower <= value + slack
    return LemmaCheck(n, value, lower, upper, bool(ok))


# -- order tables ----------------------------------------------------------------


@dataclass
class OrderTable:
    corollary: str
    psi: PsiFunction
    rows: list  # (n, lhs_proxy, rhs_form, ratio)
    band: float
    verdict: str
    ratio_band: float
    growth: float
    small_o: bool | None = None
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "lhs_proxy", "rhs_form", "ratio"])
        for n, lhs, rhs, r in self.rows:
            w.writerow([n, f"{lhs:.12g}", f"{rhs:.12g}", f"{r:.12g}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "corollary": self.corollary,
            "psi": self.psi.to_json(),
            "rows": [list(r) for r in self.rows],
            "band": self.band,
            "growth": self.growth,
            "small_o": self.small_o,
            "verdict": self.verdict,
            "ratio_band": self.ratio_band,
            "notes": list(self.notes),
        }


def _is_family(psi, family, p_one: bool):
    if psi.family != family or (p_one != (psi.p == 1)):
        want = "p = 1" if p_one else "p > 1"
        raise AdmissibilityError(f"this table needs a {family} function with {want}")


def order_table(corollary: str, psi: PsiFunction, n_list, p: float | None = None,
                beta: float = 0.0, ratio_band: float = 4.0) -> OrderTable:
    """Tabulate a computed bound expression against its closed asymptotic form.

    ``C1a``/``C1b``/``C2``/``C3`` use ``T_n^{1/p'}``, ``T_n`` the weighted tail
    sum; ``C4``/``C5``/``C6`` use ``sum_{k>=n} psi(k)`` (or ``psi(n) n`` when
    ``cos(beta pi/2) = 0``).  ``T5`` puts the two branch expressions side by
    side: they stay comparable for M_C weights and drift apart otherwise, so
    for M_0 weights outside M_C the verdict asks the ratio to grow at least
    twofold over the range instead of staying in the band.
    """
    corollary = {c.lower(): c for c in COROLLARIES}.get(str(corollary).lower())
    if corollary is None:
        raise ValueError(f"unknown corollary; expected one of {COROLLARIES}")
    ns = sorted({int(n) for n in n_list})
    if not ns or ns[0] < 1:
        raise DomainError("n_list must contain positive integers")
    if p is None:
        p = psi.p if psi.p is not None else 2.0
    p = float(p)
    notes: list[str] = []

    psi_at = lambda n: float(psi(float(n)))
    small_o_pairs = None
    if corollary in ("C1a", "C1b", "C2", "C3"):
        if corollary == "C2":
            _is_family(psi, "logpower", p_one=False)
        if corollary == "C3":
            _is_family(psi, "loglogpower", p_one=False)
            if ns[0] < 3:
                raise DomainError("C3 needs n >= 3")
        if corollary in ("C2", "C3"):
            p = psi.p
        pc = conjugate_exponent(p)
        verdict_g = classify(weighted(psi, p)).verdict
        if corollary == "C1b" and verdict_g != "MC":
            raise HypothesisError(f"C1b needs g_p in M_C (classified {verdict_g})")
        if verdict_g not in ("M0", "MC"):
            raise HypothesisError(f"g_p is not in M0 (classified {verdict_g})")
        lhs = [tail_sum(psi, pc, n).value ** (1.0 / pc) for n in ns]
        if corollary == "C1a":
            rhs = [phi_s(psi, pc, n) ** (1.0 / pc) for n in ns]
        elif corollary == "C1b":
            rhs = [psi_at(n) * n ** (1.0 / p) for n in ns]
        elif corollary == "C2":
            rhs = [psi_at(n) * n ** (1.0 / p) * math.log(n) ** (1.0 / pc) for n in ns]
        else:
            rhs = [psi_at(n) * n ** (1.0 / p) * (math.log(n) * math.log(math.log(n))) ** (1.0 / pc)
                   for n in ns]
        if verdict_g == "M0":
            small_o_pairs = [psi_at(n) * n ** (1.0 / p) / v for n, v in zip(ns, lhs)]
    else:
        if corollary == "C4" and (psi.family != "power" or not psi.a > 1):
            raise AdmissibilityError("C4 needs psi = t^-r with r > 1")
        if corollary == "C5":
            _is_family(psi, "logpower", p_one=True)
        if corollary == "C6":
            _is_family(psi, "loglogpower", p_one=True)
            if ns[0] < 3:
                raise DomainError("C6 needs n >= 3")
        verdict_g = classify(weighted(psi, 1.0)).verdict
        if verdict_g not in ("M0", "MC"):
            raise HypothesisError(f"g = psi t is not in M0 (classified {verdict_g})")
        sums = [tail_sum(psi, 1.0, n).value for n in ns]
        gn = [psi_at(n) * n for n in ns]
        zero_branch = cos_quarter(beta) == 0
        if corollary == "T5":
            lhs, rhs = sums, gn
        elif zero_branch:
            lhs, rhs = gn, gn
        elif corollary == "C4":
            lhs, rhs = sums, [float(n) ** (1.0 - psi.a) * psi.scale for n in ns]
        elif corollary == "C5":
            lhs, rhs = sums, [g * math.log(n) for g, n in zip(gn, ns)]
        else:
            lhs, rhs = sums, [g * math.log(n) * math.log(math.log(n)) for g, n in zip(gn, ns)]
        if verdict_g == "M0":
            small_o_pairs = [g / v for g, v in zip(gn, sums)]

    ratios = [a / b for a, b in zip(lhs, rhs)]
    rows = [(n, a, b, r) for n, a, b, r in zip(ns, lhs, rhs, ratios)]
    band = max(ratios) / min(ratios)
    growth = ratios[-1] / ratios[0]
    small_o = None
    if small_o_pairs is not None:
        small_o = bool(all(b < a for a, b in zip(small_o_pairs, small_o_pairs[1:])))
    if len(ns) < 2:
        verdict = "Inconclusive"
        notes.append("a single n gives no ratio band")
    elif corollary == "T5" and verdict_g == "M0":
        verdict = "Pass" if growth >= 2.0 else "Fail"
        notes.append("g outside M_C: branch expressions must separate (growth >= 2)")
    else:
        verdict = "Pass" if band <= ratio_band else "Fail"
    if small_o is False:
        verdict = "Fail"
        notes.append("small-o ratio is not decreasing")
    return OrderTable(corollary, psi, rows, band, verdict, ratio_band, growth, small_o, notes)


def parse_n_list(text: str) -> list[int]:
    """``16..4096`` means powers of two from 16 to 4096; commas list explicit values."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(x) for x in text.split("..", 1))
        if lo < 1 or hi < lo:
            raise ValueError(f"bad range {text!r}")
        out, n = [], lo
        while n <= hi:
            out.append(n)
            n *= 2
        return out
    return [int(x) for x in text.split(",") if x.strip()]
