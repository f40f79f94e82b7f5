"""Best orthogonal m-term approximation, Fourier-sum errors and dual lower bounds.

``e_m(f)_s`` is the smallest L_s error left after deleting the Fourier terms of
some m-element frequency set.  Three strategies pick the set:

``Exhaustive``
    every m-subset of the support; certified optimal.  At ``s = 2`` the error
    is evaluated by Parseval, elsewhere on the quadrature grid.
``Greedy``
    the m largest ``|c_k|``; optimal at ``s = 2`` by orthogonality.
``SymmetricPairs``
    the ``m // 2`` conjugate pairs of largest amplitude, plus one extra
    frequency when m is odd.

Deleting a frequency outside the support changes nothing, so when ``m`` exceeds
the support the chosen set is padded with absent frequencies in the order
``0, -1, 1, -2, 2, ...``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CombinatorialBlowupError, DomainError, HypothesisError
from .psi_families import (
    PsiFunction,
    alpha_inf,
    conjugate_exponent,
    tail_sum,
    weighted,
)
from .trig_core import (
    DEFAULT_GRIDSPEC,
    FrequencySet,
    GridSpec,
    TrigPoly,
    lp_norm,
    parseval_l2,
    partial_sum_order,
    quarter_phase,
    remove_frequencies,
    sup_norm,
)

MAX_SUBSETS = 2_000_000
_TIE_RTOL = 1e-12


class Strategy(str, Enum):
    EXHAUSTIVE = "Exhaustive"
    GREEDY = "Greedy"
    SYMMETRIC_PAIRS = "SymmetricPairs"

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown strategy {value!r}")


@dataclass(frozen=True)
class ApproxResult:
    chosen: FrequencySet
    error: float
    error_interval: tuple[float, float]
    strategy: Strategy
    certified: bool

    def to_json(self) -> dict:
        return {
            "chosen": list(self.chosen.members),
            "error": self.error,
            "error_interval": list(self.error_interval),
            "strategy": self.strategy.value,
            "certified": self.certified,
        }


def _check_s(s: float) -> float:
    s = float(s)
    if not s > 1:
        raise DomainError(f"metric exponent s must be in (1, inf], got {s}")
    return s


def residual_norm(r: TrigPoly, s: float, grid: GridSpec = DEFAULT_GRIDSPEC) -> tuple[float, float]:
    """``||r||_s`` as an interval: exact for s = 2, ``[value, value + gap]`` for s = inf."""
    if not len(r):
        return 0.0, 0.0
    if s == 2:
        v = parseval_l2(r)
        return v, v
    if math.isinf(s):
        sn = sup_norm(r, grid)
        return sn.value, sn.upper
    v = lp_norm(r, s, grid)
    return v, v


def _pad(chosen: list[int], support: set[int], m: int) -> list[int]:
    out = list(chosen)
    taken = set(out)
    k = 0
    while len(out) < m:
        for cand in ((0,) if k == 0 else (-k, k)):
            if len(out) < m and cand not in support and cand not in taken:
                out.append(cand)
                taken.add(cand)
        k += 1
    return out


def _result(f: TrigPoly, chosen: list[int], s, grid, strategy, certified) -> ApproxResult:
    support = set(f.ks.tolist())
    m_real = [k for k in chosen if k in support]
    lo, hi = residual_norm(remove_frequencies(f, m_real), s, grid)
    return ApproxResult(FrequencySet(chosen), hi, (lo, hi), strategy, certified)


def _greedy_order(f: TrigPoly) -> list[int]:
    ks, amps = f.ks.tolist(), np.abs(f.cs).tolist()
    return [k for _, _, k in sorted(zip((-a for a in amps), (abs(k) for k in ks), ks))]


def _symmetric_order(f: TrigPoly, m: int) -> list[int]:
    amp: dict[int, float] = {}
    for k, c in f.items():
        amp[abs(k)] = amp.get(abs(k), 0.0) + abs(c)
    pairs = sorted((k for k in amp if k != 0), key=lambda k: (-amp[k], k))
    chosen = []
    for k in pairs[: m // 2]:
        chosen += [-k, k]
    if m % 2:
        support = set(f.ks.tolist())
        if 0 in support:
            chosen.append(0)
        else:
            extra = [k for k in _greedy_order(f) if k not in chosen]
            if extra:
                chosen.append(extra[0])
    return chosen


def _subset_count(S: int, m: int, s: float) -> int:
    if s == 2:
        return math.comb(S, m)
    return sum(math.comb(S, j) for j in range(m + 1))


def _exhaustive(f: TrigPoly, m: int, s: float, grid: GridSpec) -> list[int]:
    # Away from s = 2 deleting a term can raise the norm, and any smaller set
    # padded with absent frequencies is a legal m-set, so all sizes <= m compete.
    ks = f.ks.tolist()
    S = len(ks)
    if m >= S and s == 2:
        return ks
    m = min(m, S)
    count = _subset_count(S, m, s)
    if count > MAX_SUBSETS:
        raise CombinatorialBlowupError(f"{count} candidate subsets of a {S}-term support exceed {MAX_SUBSETS}")
    if m == 0:
        return []
    if s == 2:
        combos = np.array(list(itertools.combinations(range(S), m)), dtype=np.int64).reshape(-1, m)
        w = np.abs(f.cs) ** 2
        score = np.maximum(w.sum() - w[combos].sum(axis=1), 0.0)
        sets = combos.tolist()
    else:
        N = grid.resolve(f)
        t = np.arange(N) * (2.0 * math.pi / N)
        rows = f.cs[:, None] * np.exp(1j * np.outer(f.ks, t))
        total = rows.sum(axis=0)
        sets, parts = [], []
        step = max(1, (1 << 22) // N)
        for j in range(m + 1):
            combos = np.array(list(itertools.combinations(range(S), j)), dtype=np.int64).reshape(-1, j) \
                if j else np.zeros((1, 0), dtype=np.int64)
            sets += combos.tolist()
            for i in range(0, len(combos), step):
                block = np.abs(total[None, :] - rows[combos[i:i + step]].sum(axis=1))
                parts.append(block.max(axis=1) if math.isinf(s) else (block**s).sum(axis=1))
        score = np.concatenate(parts)
    # compare in norm units: s-th powers would turn real gaps into round-off
    if s == 2:
        score = np.sqrt(score)
    elif not math.isinf(s):
        score = score ** (1.0 / s)
    best = float(score.min())
    # enumeration runs by size, then lexicographically over sorted ks, so the
    # first near-minimal entry is the shortest such set, lexicographically first
    idx = int(np.argmax(score <= best + _TIE_RTOL * float(score.max())))
    return [ks[i] for i in sets[idx]]


def best_orth_approx(f: TrigPoly, m: int, s: float = 2.0, strategy="Greedy",
                     grid: GridSpec = DEFAULT_GRIDSPEC) -> ApproxResult:
    """Error of deleting ``m`` Fourier terms of ``f`` chosen by ``strategy``.

    ``error`` is the conservative (upper) end of ``error_interval``; the two
    differ only for ``s = inf`` where the sup norm carries a grid gap.
    """
    s = _check_s(s)
    m = int(m)
    if m < 0:
        raise DomainError("m must be >= 0")
    strategy = Strategy.parse(strategy)
    support = set(f.ks.tolist())
    if strategy is Strategy.EXHAUSTIVE:
        chosen = _exhaustive(f, m, s, grid)
    elif strategy is Strategy.GREEDY:
        chosen = _greedy_order(f)[:m]
    else:
        chosen = _symmetric_order(f, m)
    chosen = _pad(chosen, support, m)
    return _result(f, chosen, s, grid, strategy, strategy is Strategy.EXHAUSTIVE)


def fourier_sum_error(f: TrigPoly, n: int, s: float = 2.0, grid: GridSpec = DEFAULT_GRIDSPEC) -> float:
    """``||f - S_{n-1} f||_s``; the upper end of the interval when ``s = inf``."""
    s = _check_s(s)
    r = remove_frequencies(f, partial_sum_order(f, n).ks.tolist())
    return residual_norm(r, s, grid)[1]


# -- dual lower bounds -----------------------------------------------------------


def _l_term(l) -> float:
    if math.isinf(l):
        return 0.0
    if l < 1:
        raise DomainError("l must be a positive integer or inf")
    return 1.0 / (2.0 * l)


def _xi(s: float) -> float:
    from .bounds_report import xi

    return xi(s)


def dual_lower_bound(theorem: str, psi: PsiFunction, beta: float, p_or_s: float, n: int,
                     l=8) -> float:
    """Analytic lower bound for ``e_{2n}`` of the theorem's extremal function.

    The infimum over deleted sets is resolved in closed form using the
    monotonicity of the coefficients, so nothing is enumerated.  ``l`` is the
    cutoff parameter of the Vallee-Poussin or conjugate-kernel test function;
    ``l = math.inf`` gives the limiting value.  Negative values clamp to zero.
    """
    theorem = theorem.upper()
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    lt = _l_term(l)
    if theorem == "T1":
        p = float(p_or_s)
        pc = conjugate_exponent(p)
        a = alpha_inf(weighted(psi, p), n)
        if not a > 0:
            raise HypothesisError("alpha(g_p) has zero infimum")
        T = tail_sum(psi, pc, n).value
        val = (1.0 / (3.0 * _xi(p))) * (a / (pc + a)) ** (1.0 / p) * (1.0 - lt - pc / a) * T ** (1.0 / pc)
    elif theorem == "T2":
        s = float(p_or_s)
        sc = conjugate_exponent(s)
        a = alpha_inf(weighted(psi, sc), n)
        if not a > 0:
            raise HypothesisError("alpha(g_s') has zero infimum")
        T = tail_sum(psi, s, n).value
        val = (1.0 / (4.0 * _xi(sc))) * (a / (s + a)) ** (1.0 / sc) * (1.0 - lt - s / a) * T ** (1.0 / s)
    elif theorem == "T3":
        a1 = alpha_inf(weighted(psi, 1.0), 1)
        S = tail_sum(psi, 1.0, n).value
        c = abs(quarter_phase(beta, 1).real)
        val = c / (12.0 * math.pi) * (1.0 - 1.0 / (a1 * n) - lt) * S
    elif theorem == "T4":
        val = float(psi(2.0 * n)) * n / (30.0 * math.pi)
    else:
        raise ValueError(f"dual bounds exist for T1..T4, not {theorem!r}")
    return max(0.0, float(val))
