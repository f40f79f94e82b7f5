"""Decay functions psi(t) on [1, inf) and the quantities built from them.

Three families are supported::

    power        psi(t) = c * t**(-r)
    logpower     psi(t) = c * t**(-1/p) * ln(t + K)**(-gamma)
    loglogpower  psi(t) = c * t**(-1/p) * ln(t + K1)**(-gamma) * ln(ln(t + K2))**(-delta)

Everything is evaluated through the logarithm ``ln psi`` and the elasticity
``t psi'(t) / psi(t)``, both in closed form.  The alpha characteristic is the
reciprocal of the absolute elasticity, so no derivative is ever finite
differenced.

Tail integrals ``Phi_s(x) = int_x^inf psi^s(t) t^(s-2) dt`` (and the s = 1
variant ``int_x^inf psi(t) dt``) are computed in the variable ``u = ln t`` and,
for the slowly decaying log families, ``w = ln ln t`` with a closed-form tail
beyond ``w = 40``.  At that point ``ln(t + K)`` equals ``ln t`` to every bit of
double precision, so the tail formula is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple, Union

import mpmath
import numpy as np
from scipy import integrate, optimize

from .errors import AdmissibilityError, DivergenceError, DomainError, RangeError

FAMILIES = ("power", "logpower", "loglogpower")

# exponents closer than this to a critical value are treated as exactly critical
_SNAP = 1e-12
# ln ln t beyond which ln(t + K) == ln t in double precision
_W_TAIL = 40.0
_CHUNK = 1 << 20


def conjugate_exponent(p: float) -> float:
    """Return p' with 1/p + 1/p' = 1 (p = 1 gives inf, p = inf gives 1)."""
    if p < 1:
        raise DomainError(f"exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _ge(x: float, bound: float) -> bool:
    # admissibility comparisons tolerate round-off in user-typed constants
    return x >= bound - 1e-12 * max(1.0, abs(bound))


@dataclass(frozen=True)
class PsiFunction:
    """A member of one of the supported decay families.

    Build instances with :func:`Power`, :func:`LogPower` or
    :func:`LogLogPower`, which enforce the admissibility constraints.  For the
    log families ``K`` is stored in ``K1``.
    """

    family: str
    a: float
    p: float | None = None
    gamma: float = 0.0
    delta: float = 0.0
    K1: float = 0.0
    K2: float = 0.0
    scale: float = 1.0

    # -- evaluation -------------------------------------------------------

    def log_value_u(self, u):
        """``ln psi(e^u)``, stable for arbitrarily large ``u``."""
        u = np.asarray(u, dtype=float)
        out = math.log(self.scale) - self.a * u
        if self.gamma:
            out = out - self.gamma * np.log(_log_shift(u, self.K1))
        if self.delta:
            out = out - self.delta * np.log(np.log(_log_shift(u, self.K2)))
        return out

    def log_value(self, t):
        t = np.asarray(t, dtype=float)
        return self.log_value_u(np.log(t))

    def __call__(self, t):
        return np.exp(self.log_value(t))

    def elasticity_u(self, u):
        u = np.asarray(u, dtype=float)
        out = np.full_like(u, -self.a)
        if self.gamma:
            out = out - self.gamma / ((1.0 + self.K1 * np.exp(-u)) * _log_shift(u, self.K1))
        if self.delta:
            L2 = _log_shift(u, self.K2)
            out = out - self.delta / ((1.0 + self.K2 * np.exp(-u)) * L2 * np.log(L2))
        return out

    def elasticity(self, t):
        """``t psi'(t) / psi(t)`` in closed form."""
        t = np.asarray(t, dtype=float)
        return self.elasticity_u(np.log(t))

    def derivative(self, t):
        """``psi'(t)``; every family is smooth so ``psi'(t + 0) = psi'(t)``."""
        t = np.asarray(t, dtype=float)
        return self(t) * self.elasticity(t) / t

    @property
    def limit_elasticity(self) -> float:
        return -self.a

    def scaled(self, c: float) -> "PsiFunction":
        if c <= 0:
            raise DomainError("scale factor must be positive")
        return replace(self, scale=self.scale * c)

    # -- serialization ----------------------------------------------------

    @property
    def params(self) -> dict:
        if self.family == "power":
            d = {"r": self.a}
        elif self.family == "logpower":
            d = {"p": self.p, "gamma": self.gamma, "K": self.K1}
        else:
            d = {"p": self.p, "gamma": self.gamma, "delta": self.delta, "K1": self.K1, "K2": self.K2}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params}

    @classmethod
    def from_json(cls, obj: dict) -> "PsiFunction":
        family = obj["family"]
        params = dict(obj.get("params", {}))
        scale = params.pop("scale", 1.0)
        if family == "power":
            psi = Power(**params)
        elif family == "logpower":
            psi = LogPower(**params)
        elif family == "loglogpower":
            psi = LogLogPower(**params)
        else:
            raise AdmissibilityError(f"unknown family {family!r}")
        return psi.scaled(scale) if scale != 1.0 else psi

    def __str__(self) -> str:
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family}:{args}"


def _log_shift(u, K):
    # ln(e^u + K) without forming e^u
    return u + np.log1p(K * np.exp(-u))


def Power(r: float) -> PsiFunction:
    """``psi(t) = t**(-r)`` with ``r > 0``."""
    if not r > 0:
        raise AdmissibilityError(f"power family needs r > 0, got r={r}")
    return PsiFunction("power", a=float(r))


def LogPower(p: float, gamma: float, K: float | None = None) -> PsiFunction:
    """``psi(t) = t**(-1/p) ln(t + K)**(-gamma)``.

    For ``p > 1``: ``gamma > 1/p'`` and ``K >= exp(gamma p') - 1``.
    For ``p = 1``: ``gamma > 1`` and ``K > 0``.  ``K=None`` picks the smallest
    admissible value (``1`` when ``p = 1``).
    """
    p, gamma = float(p), float(gamma)
    if p < 1:
        raise AdmissibilityError(f"logpower needs p >= 1, got p={p}")
    if p == 1:
        if not gamma > 1:
            raise AdmissibilityError(f"logpower with p=1 needs gamma > 1, got {gamma}")
        K = 1.0 if K is None else float(K)
        if not K > 0:
            raise AdmissibilityError(f"logpower with p=1 needs K > 0, got {K}")
    else:
        pp = conjugate_exponent(p)
        if not gamma > 1.0 / pp:
            raise AdmissibilityError(f"logpower needs gamma > 1/p' = {1 / pp:g}, got {gamma}")
        kmin = math.exp(gamma * pp) - 1.0
        K = kmin if K is None else float(K)
        if not _ge(K, kmin):
            raise AdmissibilityError(f"logpower needs K >= exp(gamma p') - 1 = {kmin:.6g}, got {K}")
    return PsiFunction("logpower", a=1.0 / p, p=p, gamma=gamma, K1=K)


def LogLogPower(
    p: float, gamma: float, delta: float, K1: float | None = None, K2: float | None = None
) -> PsiFunction:
    """``psi(t) = t**(-1/p) ln(t + K1)**(-gamma) ln(ln(t + K2))**(-delta)``.

    For ``p > 1`` both published constraint sets are enforced:
    ``K2 >= K1 E - 1`` and ``K2 >= K1 >= E - 1`` with
    ``E = exp(max((gamma + delta) p', e))``, plus ``gamma >= 1/p'`` and
    ``delta > 1/p'``.  For ``p = 1``: ``gamma >= 1``, ``delta > 1``,
    ``K1 > 0``, ``K2 > e - 1``.
    """
    p, gamma, delta = float(p), float(gamma), float(delta)
    if p < 1:
        raise AdmissibilityError(f"loglogpower needs p >= 1, got p={p}")
    if p == 1:
        if not gamma >= 1:
            raise AdmissibilityError(f"loglogpower with p=1 needs gamma >= 1, got {gamma}")
        if not delta > 1:
            raise AdmissibilityError(f"loglogpower with p=1 needs delta > 1, got {delta}")
        K1 = 1.0 if K1 is None else float(K1)
        K2 = math.e if K2 is None else float(K2)
        if not K1 > 0:
            raise AdmissibilityError(f"loglogpower with p=1 needs K1 > 0, got {K1}")
        if not K2 > math.e - 1:
            raise AdmissibilityError(f"loglogpower with p=1 needs K2 > e - 1, got {K2}")
    else:
        pp = conjugate_exponent(p)
        if not _ge(gamma, 1.0 / pp):
            raise AdmissibilityError(f"loglogpower needs gamma >= 1/p' = {1 / pp:g}, got {gamma}")
        if not delta > 1.0 / pp:
            raise AdmissibilityError(f"loglogpower needs delta > 1/p' = {1 / pp:g}, got {delta}")
        E = math.exp(max((gamma + delta) * pp, math.e))
        K1 = E - 1.0 if K1 is None else float(K1)
        K2 = K1 * E - 1.0 if K2 is None else float(K2)
        if not _ge(K1, E - 1.0):
            raise AdmissibilityError(f"loglogpower needs K1 >= {E - 1:.6g}, got {K1}")
        if not (_ge(K2, K1 * E - 1.0) and K2 >= K1):
            raise AdmissibilityError(f"loglogpower needs K2 >= max(K1, K1*E - 1) = {max(K1, K1 * E - 1):.6g}, got {K2}")
    return PsiFunction("loglogpower", a=1.0 / p, p=p, gamma=gamma, delta=delta, K1=K1, K2=K2)


def parse_psi(text: str) -> PsiFunction:
    """Parse ``family:args`` as used on the command line.

    Examples: ``power:0.75``, ``logpower:2,1``, ``logpower:p=2,gamma=1,K=7``,
    ``loglogpower:p=2,gamma=0.5,delta=1``.  A JSON object is accepted too.
    """
    text = text.strip()
    if text.startswith("{"):
        import json

        return PsiFunction.from_json(json.loads(text))
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    ctor = {"power": Power, "logpower": LogPower, "loglogpower": LogLogPower}.get(family)
    if ctor is None:
        raise AdmissibilityError(f"unknown family {family!r}; expected one of {FAMILIES}")
    args, kwargs = [], {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        if "=" in item:
            key, val = item.split("=", 1)
            kwargs[key.strip()] = float(val)
        else:
            args.append(float(item))
    return ctor(*args, **kwargs)


@dataclass(frozen=True)
class WeightedPsi:
    """``g_q(t) = psi(t) t**(1/q)`` for ``q >= 1``."""

    base: PsiFunction
    q: float

    def __post_init__(self):
        if not self.q >= 1:
            raise DomainError(f"weight exponent q must be >= 1, got {self.q}")

    def log_value(self, t):
        t = np.asarray(t, dtype=float)
        return self.base.log_value(t) + np.log(t) / self.q

    def __call__(self, t):
        return np.exp(self.log_value(t))

    def elasticity(self, t):
        return self.base.elasticity(t) + 1.0 / self.q

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        w = 1.0 / self.q
        return self.base.derivative(t) * t**w + self.base(t) * w * t ** (w - 1.0)

    @property
    def limit_elasticity(self) -> float:
        return self.base.limit_elasticity + 1.0 / self.q

    def scaled(self, c: float) -> "WeightedPsi":
        return WeightedPsi(self.base.scaled(c), self.q)


AnyPsi = Union[PsiFunction, WeightedPsi]


def weighted(psi: PsiFunction, q: float) -> WeightedPsi:
    return WeightedPsi(psi, float(q))


# -- alpha characteristic ----------------------------------------------------


@dataclass(frozen=True)
class SearchGrid:
    """Log-spaced grid used for inf/sup of the alpha characteristic."""

    t_max: float = 1e9
    points: int = 4096

    def nodes(self, n: float) -> np.ndarray:
        hi = max(self.t_max, 10.0 * n)
        return np.geomspace(float(n), hi, self.points)


DEFAULT_GRID = SearchGrid()


def alpha(psi: AnyPsi, t):
    """``psi(t) / (t |psi'(t+0)|)``, the reciprocal absolute elasticity."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 1):
        raise DomainError("alpha is defined for t >= 1")
    el = np.abs(psi.elasticity(t_arr))
    with np.errstate(divide="ignore"):
        out = np.where(el > 0, 1.0 / np.where(el > 0, el, 1.0), np.inf)
    return float(out) if out.ndim == 0 else out


def alpha_limit(psi: AnyPsi) -> float:
    """Closed-form limit of alpha as t -> inf."""
    el = psi.limit_elasticity
    if abs(el) < _SNAP:
        return math.inf
    return 1.0 / abs(el)


def alpha_inf(psi: AnyPsi, n: float = 1, cfg: SearchGrid = DEFAULT_GRID) -> float:
    """Infimum of alpha over t >= n: grid minimum combined with the t -> inf limit."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return _alpha_extreme(psi, float(n), cfg)[0]


def alpha_sup(psi: AnyPsi, n: float = 1, cfg: SearchGrid = DEFAULT_GRID) -> float:
    """Supremum of alpha over t >= n; ``math.inf`` when the limit diverges."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return _alpha_extreme(psi, float(n), cfg)[1]


@lru_cache(maxsize=4096)
def _alpha_extreme(psi, n, cfg):
    t = cfg.nodes(n)
    vals = alpha(psi, t)
    lim = alpha_limit(psi)
    lo = min(float(vals.min()), _refine(psi, t, int(vals.argmin()), 1.0))
    hi = max(float(vals.max()), -_refine(psi, t, int(vals.argmax()), -1.0))
    return min(lo, lim), max(hi, lim)


def _refine(psi, t, i, sign):
    # Brent polish of an interior grid extremum of sign * alpha
    if i == 0 or i == len(t) - 1:
        return sign * float(alpha(psi, t[i]))
    f = lambda x: sign * float(alpha(psi, x))
    res = optimize.minimize_scalar(f, bounds=(t[i - 1], t[i + 1]), method="bounded",
                                   options={"xatol": 1e-12 * t[i]})
    return min(float(res.fun), f(t[i]))


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str  # "M0", "MC" or "Neither"
    lower_margin: float
    upper_margin: float
    search_range: tuple
    grid_size: int
    decreasing: bool
    convex: bool

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "lower_margin": self.lower_margin,
            "upper_margin": None if math.isinf(self.upper_margin) else self.upper_margin,
            "search_range": list(self.search_range),
            "grid_size": self.grid_size,
            "decreasing": self.decreasing,
            "convex": self.convex,
        }


def is_convex(psi: AnyPsi, cfg: SearchGrid = DEFAULT_GRID, tol: float = 1e-9) -> bool:
    """Second divided differences on the log grid are >= -tol."""
    t = cfg.nodes(1.0)
    v = psi(t)
    d1 = np.diff(v) / np.diff(t)
    d2 = 2.0 * np.diff(d1) / (t[2:] - t[:-2])
    return bool(np.all(d2 >= -tol))


def classify(psi: AnyPsi, cfg: SearchGrid = DEFAULT_GRID) -> ClassificationResult:
    """Place ``psi`` in M_C, M_0 or neither.

    Membership in M (positive, decreasing to zero, convex) is checked on the
    grid; then M_0 needs a positive infimum of alpha over t >= 1 and M_C
    additionally a finite supremum.
    """
    t = cfg.nodes(1.0)
    el = psi.elasticity(t)
    decreasing = bool(np.all(el < 0)) and psi.limit_elasticity <= _SNAP
    # a zero limit elasticity still decays only if a log factor is present
    if abs(psi.limit_elasticity) < _SNAP:
        base = psi.base if isinstance(psi, WeightedPsi) else psi
        decreasing = decreasing and (base.gamma > 0 or base.delta > 0)
    convex = is_convex(psi, cfg)
    lo, hi = _alpha_extreme(psi, 1.0, cfg)
    if not (decreasing and convex):
        verdict = "Neither"
    elif math.isfinite(hi):
        verdict = "MC"
    elif lo > 0:
        verdict = "M0"
    else:
        verdict = "Neither"
    return ClassificationResult(verdict, lo, hi, (1.0, float(t[-1])), cfg.points, decreasing, convex)


# -- tail integrals ------------------------------------------------------------


def _weight_exponent(s: float) -> float:
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    return 0.0 if s == 1 else s - 2.0


def _snap(x: float) -> float:
    return 0.0 if abs(x) < _SNAP else x


def _tail_exponents(psi: PsiFunction, s: float) -> tuple[float, float, float]:
    """Exponents of ``psi^s t^(s-2) dt`` in the u = ln t and w = ln ln t variables.

    In u the integrand behaves like ``exp(A u) u^(-gamma s) (ln u)^(-delta s)``;
    when ``A = 0`` it becomes ``exp(B w) w^(-C)`` in w.
    """
    A = _snap(_weight_exponent(s) + 1.0 - s * psi.a)
    B = _snap(1.0 - psi.gamma * s)
    C = psi.delta * s
    if A > 0 or (A == 0 and psi.family == "power"):
        raise DivergenceError(f"int psi^s t^(s-2) diverges for {psi} at s={s}")
    if A == 0 and (B > 0 or (B == 0 and C <= 1)):
        raise DivergenceError(f"int psi^s t^(s-2) diverges for {psi} at s={s}")
    return A, B, C


def _log_integrand_u(psi: PsiFunction, s: float, A: float, u):
    out = s * math.log(psi.scale) + A * u
    if psi.gamma:
        out = out - psi.gamma * s * np.log(_log_shift(u, psi.K1))
    if psi.delta:
        out = out - psi.delta * s * np.log(np.log(_log_shift(u, psi.K2)))
    return out


def _far_tail_w(B: float, C: float, w0: float) -> float:
    """``int_{w0}^inf exp(B w) w^(-C) dw`` for B <= 0."""
    if B == 0:
        return w0 ** (1.0 - C) / (C - 1.0)
    if C == 0:
        return math.exp(B * w0) / -B
    return float(w0 ** (1.0 - C) * mpmath.expint(C, -B * w0))


@lru_cache(maxsize=65536)
def _phi_u(psi: PsiFunction, s: float, u0: float) -> float:
    A, B, C = _tail_exponents(psi, s)
    if psi.family == "power":
        return psi.scale**s * math.exp(A * u0) / -A
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=500)
    if A < 0:
        F = lambda u: math.exp(_log_integrand_u(psi, s, A, u))
        U = u0 + 80.0 / -A
        val = integrate.quad(F, u0, U, **opts)[0]
        return val + F(U) / -A
    total = 0.0
    F = lambda u: math.exp(_log_integrand_u(psi, s, 0.0, u))
    if u0 < 1.0:
        total += integrate.quad(F, u0, 1.0, **opts)[0]
    w0 = math.log(max(u0, 1.0))
    if w0 < _W_TAIL:
        G = lambda w: math.exp(_log_integrand_u(psi, s, 0.0, math.exp(w)) + w)
        pts = [x for x in (1.0, 2.0, 4.0, 8.0, 16.0) if w0 < x < _W_TAIL]
        total += integrate.quad(G, w0, _W_TAIL, points=pts or None, **opts)[0]
        w0 = _W_TAIL
    total += psi.scale**s * _far_tail_w(B, C, w0)
    return total


def phi_s(psi: PsiFunction, s: float, x: float) -> float:
    """``int_x^inf psi^s(t) t^(s-2) dt``; for ``s = 1`` the weight is dropped.

    Raises :class:`DivergenceError` when the integral diverges.
    """
    if x < 1:
        raise DomainError("phi_s needs x >= 1")
    return _phi_u(psi, float(s), math.log(x))


def psi_integral(psi: PsiFunction, x: float) -> float:
    """``Psi(x) = int_x^inf psi(t) dt``."""
    return phi_s(psi, 1.0, x)


def _phi_inverse_u(psi: PsiFunction, s: float, y: float) -> float:
    if not y > 0:
        raise RangeError("phi_s_inverse needs y > 0")
    top = _phi_u(psi, s, 0.0)
    if y > top * (1 + 1e-14):
        raise RangeError(f"y={y} exceeds Phi_s(1)={top}")
    if y >= top:
        return 0.0
    A, _, _ = _tail_exponents(psi, s)
    if psi.family == "power":
        return math.log(-A * y / psi.scale**s) / A
    lo, hi = 0.0, 1.0
    while _phi_u(psi, s, hi) > y:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise RangeError("inverse lies beyond the floating-point range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _phi_u(psi, s, mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def phi_s_inverse(psi: PsiFunction, s: float, y: float) -> float:
    """The x >= 1 with ``Phi_s(x) = y``; needs ``0 < y <= Phi_s(1)``."""
    u = _phi_inverse_u(psi, float(s), y)
    if u > 709.0:
        raise RangeError("inverse exceeds the double-precision range")
    return math.exp(u)


def _floor_guarded(x: float) -> int:
    # values landing a few ulps under an integer are round-off, not fractions
    return int(math.floor(x * (1.0 + 1e-12)))


def cutoff_A(psi: PsiFunction, s: float, l: int, n: int) -> int:
    """``[Phi_s^{-1}(Phi_s(n) / (2l))] + 2n``."""
    if l < 1 or n < 1:
        raise DomainError("l and n must be positive integers")
    x = phi_s_inverse(psi, s, phi_s(psi, s, n) / (2.0 * l))
    return _floor_guarded(x) + 2 * int(n)


def cutoff_D(psi: PsiFunction, l: int, n: int) -> int:
    """``[Psi^{-1}(Psi(n) / (2l))] + 2n``."""
    return cutoff_A(psi, 1.0, l, n)


# -- certified tail sums -------------------------------------------------------


class TailSum(NamedTuple):
    value: float
    error_bound: float

    @property
    def low(self) -> float:
        return self.value - self.error_bound

    @property
    def high(self) -> float:
        return self.value + self.error_bound


def terms(psi: PsiFunction, s: float, k):
    """Summands ``psi^s(k) k^(s-2)`` (``psi(k)`` when s = 1)."""
    k = np.asarray(k, dtype=float)
    return np.exp(s * psi.log_value(k) + _weight_exponent(s) * np.log(k))


def partial_sum(psi: PsiFunction, s: float, lo: int, hi: int) -> float:
    """``sum_{k=lo}^{hi} terms(k)`` in fixed-order chunks."""
    parts = []
    for start in range(int(lo), int(hi) + 1, _CHUNK):
        stop = min(start + _CHUNK, int(hi) + 1)
        parts.append(float(np.sum(terms(psi, s, np.arange(start, stop)))))
    return math.fsum(parts)


@lru_cache(maxsize=4096)
def tail_sum(psi: PsiFunction, s: float, n: int, rel_tol: float = 1e-8) -> TailSum:
    """Certified ``sum_{k >= n} psi^s(k) k^(s-2)``.

    Terms ``n .. M-1`` are summed directly.  The summand ``f`` is decreasing
    and convex for the supported families once ``t >= 64``, so the trapezoid
    and midpoint rules bracket the remainder::

        Phi_s(M) + f(M)/2  <=  sum_{k >= M} f(k)  <=  Phi_s(M) + int_{M-1/2}^{M} f

    The value is the bracket midpoint; ``error_bound`` covers half the bracket,
    quadrature error and summation round-off.
    """
    s = float(s)
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    phi_n = phi_s(psi, s, n)
    if phi_n < 1e-300:
        return TailSum(0.0, 0.0)
    f = lambda t: float(terms(psi, s, t))
    target = 2.0 * rel_tol * phi_n
    M = max(n, 64)
    while True:
        seg = integrate.quad(f, M - 0.5, M, epsabs=0.0, epsrel=1e-13)[0]
        width = seg - 0.5 * f(M)
        if width <= target or M > 1 << 40:
            break
        M *= 2
    head = partial_sum(psi, s, n, M - 1) if M > n else 0.0
    phi_m = phi_s(psi, s, M)
    r_lo, r_hi = phi_m + 0.5 * f(M), phi_m + seg
    value = head + 0.5 * (r_lo + r_hi)
    err = 0.5 * (r_hi - r_lo) + 1e-12 * r_hi + 1e-15 * head * math.log2(max(M, 2))
    return TailSum(value, err)
