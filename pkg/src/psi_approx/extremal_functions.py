"""Explicit class members whose m-term approximation error realises the lower bounds.

Three constructions are provided, all in coefficient space:

* :func:`extremal_fp`, a positive cosine series with coefficients
  proportional to ``psi^{p'}(k) k^{p'-2}`` for ``k >= n`` (truncated);
* :func:`extremal_fm`, the (psi, beta)-integral of a Vallee-Poussin kernel;
* :func:`extremal_fn_star`, a tent-shaped cosine polynomial of degree ``2n``.

:func:`verify_membership` measures the (psi, beta)-derivative norm so callers
can check that a function lies in the unit ball of its class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, DivergenceError, DomainError, RangeError, TruncationError
from .psi_families import (
    PsiFunction,
    alpha_inf,
    classify,
    conjugate_exponent,
    phi_s_inverse,
    tail_sum,
    weighted,
)
from .trig_core import (
    DEFAULT_GRIDSPEC,
    GridSpec,
    TrigPoly,
    lp_norm,
    psi_beta_derivative,
    quarter_phase,
    sup_norm,
)

TOL_MEMBERSHIP = 1e-6
MAX_TRUNC = 1 << 22


@dataclass(frozen=True)
class ClassSpec:
    """The class ``L^psi_{beta,p}``: (psi, beta)-derivative in the unit ball of L_p."""

    psi: PsiFunction
    beta: float = 0.0
    p: float = 2.0

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError(f"p must be in [1, inf], got {self.p}")

    @property
    def p_conj(self) -> float:
        return conjugate_exponent(self.p)


def _require_m0(psi: PsiFunction, q: float, what: str):
    g = weighted(psi, q)
    verdict = classify(g).verdict
    if verdict not in ("M0", "MC"):
        raise AdmissibilityError(f"{what}: psi(t) t^(1/{q:g}) is not in M0 (classified {verdict})")
    return g


def fp_lambda(psi: PsiFunction, p: float, n: int) -> float:
    """``(1/xi(p)) (a/(p'+a))^(1/p)`` with ``a`` the infimum of alpha(g_p) over t >= n."""
    from .bounds_report import xi

    pc = conjugate_exponent(p)
    a = alpha_inf(weighted(psi, p), n)
    return (1.0 / xi(p)) * (a / (pc + a)) ** (1.0 / p)


def _fp_tail(psi: PsiFunction, p: float, n: int) -> float:
    pc = conjugate_exponent(p)
    try:
        return tail_sum(psi, pc, n).value
    except DivergenceError as exc:
        raise AdmissibilityError(f"sum psi^p'(k) k^(p'-2) diverges: {exc}") from exc


def default_fp_truncation(psi: PsiFunction, p: float, n: int, tol: float = 1e-6,
                          max_trunc: int = MAX_TRUNC) -> int:
    """Smallest power of two ``N >= n`` whose dropped tail is ``<= tol * T_n``.

    The dropped tail ``sum_{k>N}`` is bounded by ``Phi_{p'}(N)``.
    """
    pc = conjugate_exponent(p)
    target = tol * _fp_tail(psi, p, n)
    try:
        x = phi_s_inverse(psi, pc, target)
    except RangeError as exc:
        raise TruncationError(f"no truncation reaches relative tail {tol:g}") from exc
    N = 1 << max(int(math.ceil(x)), int(n), 1).bit_length()
    if N > max_trunc:
        raise TruncationError(
            f"relative tail {tol:g} needs N_trunc >= {x:.3g}, above the cap {max_trunc}")
    return N


def extremal_fp(psi: PsiFunction, p: float, n: int, n_trunc: int | None = None,
                tol: float = 1e-6) -> TrigPoly:
    """Truncated ``f*_p(psi; n)`` with coefficients at ``+-k`` for ``n <= k <= N_trunc``.

    ``n_trunc=None`` picks :func:`default_fp_truncation`; an explicit value is
    used as is and :func:`fp_dropped_sup` bounds what it leaves out.
    """
    if not 1 < p < math.inf:
        raise DomainError(f"extremal_fp needs 1 < p < inf, got {p}")
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    _require_m0(psi, p, "extremal_fp")
    if n_trunc is None:
        n_trunc = default_fp_truncation(psi, p, n, tol)
    if n > n_trunc:
        raise TruncationError(f"n={n} exceeds N_trunc={n_trunc}: empty polynomial")
    pc = conjugate_exponent(p)
    T = _fp_tail(psi, p, n)
    lam = fp_lambda(psi, p, n)
    k = np.arange(n, int(n_trunc) + 1, dtype=float)
    w = np.exp(pc * psi.log_value(k) + (pc - 2.0) * np.log(k))
    half = 0.5 * lam * w / T ** (1.0 / p)
    ks = np.concatenate([k, -k]).astype(np.int64)
    return TrigPoly.from_arrays(ks, np.concatenate([half, half]))


def fp_dropped_sup(psi: PsiFunction, p: float, n: int, n_trunc: int) -> float:
    """Upper bound for ``sup |f*_p - truncated f*_p|`` (the dropped cosines at t = 0)."""
    pc = conjugate_exponent(p)
    T = _fp_tail(psi, p, n)
    lam = fp_lambda(psi, p, n)
    return lam / T ** (1.0 / p) * tail_sum(psi, pc, int(n_trunc) + 1).high


def extremal_fm(psi: PsiFunction, beta: float, m: int) -> TrigPoly:
    """``f_m(psi; beta)``: flat band ``|k| <= m``, linear taper to ``2m - 1``."""
    m = int(m)
    if m < 1:
        raise DomainError("m must be >= 1")
    k = np.arange(1, 2 * m, dtype=float)
    taper = np.where(k <= m, 1.0, 2.0 * (1.0 - k / (2.0 * m)))
    amp = taper * psi(k) / (8.0 * math.pi)
    ks = np.concatenate([k, -k]).astype(np.int64)
    cs = np.concatenate([amp * quarter_phase(beta, -1), amp * quarter_phase(beta, +1)])
    return TrigPoly.from_arrays(ks, cs)


def extremal_fn_star(psi: PsiFunction, n: int) -> TrigPoly:
    """``f*_n(psi)``: weights ``k psi(k)`` up to ``n`` then ``(2n+1-k) psi(k)`` up to ``2n``."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    _require_m0(psi, 1.0, "extremal_fn_star")
    try:
        tail_sum(psi, 1.0, 1)
    except DivergenceError as exc:
        raise AdmissibilityError(f"sum psi(k) diverges: {exc}") from exc
    k = np.arange(1, 2 * n + 1, dtype=float)
    weight = np.where(k <= n, k, 2.0 * n + 1.0 - k)
    amp = weight * psi(k) / (10.0 * math.pi * n)
    ks = np.concatenate([k, -k]).astype(np.int64)
    return TrigPoly.from_arrays(ks, np.concatenate([amp, amp]))


def verify_membership(f: TrigPoly, spec: ClassSpec, grid: GridSpec = DEFAULT_GRIDSPEC,
                      tol: float = TOL_MEMBERSHIP) -> tuple[float, bool]:
    """Norm of the (psi, beta)-derivative and whether it is ``<= 1 + tol``.

    For ``p = inf`` the conservative end of the sup-norm interval is used.
    """
    d = psi_beta_derivative(f, spec.psi, spec.beta)
    if math.isinf(spec.p):
        norm = sup_norm(d, grid).upper
    else:
        norm = lp_norm(d, spec.p, grid)
    return norm, bool(norm <= 1.0 + tol)
