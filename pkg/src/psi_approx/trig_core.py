"""Finite trigonometric polynomials and the operators acting on them.

A :class:`TrigPoly` stores complex Fourier coefficients ``c_k`` of

    f(t) = sum_k c_k exp(i k t),     c_k = (1/2pi) int_{-pi}^{pi} f(t) exp(-i k t) dt.

Norms use the non-normalized convention ``||f||_p = (int_0^{2pi} |f|^p)^(1/p)``
and the rectangle rule on a uniform grid of ``N`` points, with ``N`` a power of
two at least ``4 (support_bound + 1)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import GridError, SymmetryError
from .psi_families import PsiFunction

TWO_PI = 2.0 * math.pi


class TrigPoly:
    """Immutable finite-support coefficient map ``k -> c_k``.

    Exact zeros are dropped, so ``len(f)`` is the number of signed
    frequencies actually present.
    """

    __slots__ = ("_ks", "_cs", "_index")

    def __init__(self, coeffs: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, complex] = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), 0j) + complex(c)
        ks = np.array(sorted(k for k, c in acc.items() if c != 0), dtype=np.int64)
        cs = np.array([acc[int(k)] for k in ks], dtype=complex)
        ks.flags.writeable = False
        cs.flags.writeable = False
        self._ks, self._cs = ks, cs
        self._index = {int(k): i for i, k in enumerate(ks)}

    @classmethod
    def from_arrays(cls, ks, cs) -> "TrigPoly":
        return cls(zip(np.asarray(ks).tolist(), np.asarray(cs, dtype=complex).tolist()))

    @classmethod
    def from_cosines(cls, amplitudes: Mapping[int, float], constant: float = 0.0) -> "TrigPoly":
        """``constant + sum_k a_k cos(k t)`` for ``k >= 1``."""
        d = {0: constant}
        for k, a in amplitudes.items():
            d[k] = d.get(k, 0) + a / 2
            d[-k] = d.get(-k, 0) + a / 2
        return cls(d)

    @property
    def ks(self) -> np.ndarray:
        return self._ks

    @property
    def cs(self) -> np.ndarray:
        return self._cs

    @property
    def support_bound(self) -> int:
        return int(np.abs(self._ks).max()) if len(self._ks) else 0

    def __len__(self) -> int:
        return len(self._ks)

    def coeff(self, k: int) -> complex:
        i = self._index.get(int(k))
        return complex(self._cs[i]) if i is not None else 0j

    def items(self):
        return zip(self._ks.tolist(), self._cs.tolist())

    def as_dict(self) -> dict[int, complex]:
        return dict(self.items())

    def symmetry_defect(self) -> float:
        """``max_k |c_{-k} - conj(c_k)|``; zero for real-valued functions."""
        if not len(self):
            return 0.0
        return max(abs(self.coeff(-k) - c.conjugate()) for k, c in self.items())

    def is_real(self, tol: float = 1e-12) -> bool:
        return self.symmetry_defect() <= tol * max(1.0, self.l1_coeff())

    def l1_coeff(self) -> float:
        """``sum_k |c_k|``, a bound for the sup norm."""
        return float(np.sum(np.abs(self._cs)))

    def energy(self) -> float:
        """``sum_k |c_k|^2``."""
        return float(np.sum(np.abs(self._cs) ** 2))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return TrigPoly(list(self.items()) + list(other.items()))

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, c) -> "TrigPoly":
        if isinstance(c, TrigPoly):
            return NotImplemented
        return TrigPoly.from_arrays(self._ks, self._cs * complex(c))

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPoly":
        return (-1.0) * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return np.array_equal(self._ks, other._ks) and np.array_equal(self._cs, other._cs)

    def __hash__(self):
        return hash((self._ks.tobytes(), self._cs.tobytes()))

    def allclose(self, other: "TrigPoly", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        keys = set(self._index) | set(other._index)
        return all(abs(self.coeff(k) - other.coeff(k)) <= atol + rtol * max(abs(self.coeff(k)), abs(other.coeff(k)))
                   for k in keys)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c:.6g}" for k, c in list(self.items())[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"TrigPoly({{{body}{more}}})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [[k, c.real, c.imag] for k, c in self.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "TrigPoly":
        return cls((int(k), complex(re, im)) for k, re, im in obj["coeffs"])

    # -- grid values ------------------------------------------------------

    def grid_values(self, N: int) -> np.ndarray:
        """``f(2 pi j / N)`` for ``j = 0..N-1`` via one inverse FFT."""
        if len(self) and 2 * self.support_bound >= N:
            raise GridError(f"N={N} aliases frequencies up to {self.support_bound}")
        buf = np.zeros(N, dtype=complex)
        np.add.at(buf, self._ks % N, self._cs)
        return np.fft.ifft(buf) * N


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform quadrature grid.

    ``points=None`` picks the smallest power of two that is both admissible
    and at least ``min_points``; ``|f|^p`` has kinks at zeros of ``f`` so the
    rectangle rule is only spectrally exact for ``p = 2``.
    """

    points: int | None = None
    refinement_depth: int = 40
    min_points: int = 4096

    def resolve(self, f: TrigPoly) -> int:
        need = 4 * (f.support_bound + 1)
        if self.points is None:
            return 1 << (max(need, self.min_points) - 1).bit_length()
        if not _is_power_of_two(self.points):
            raise GridError(f"grid size must be a power of two, got {self.points}")
        if self.points < need:
            raise GridError(f"grid size {self.points} < 4 (support_bound + 1) = {need}")
        return self.points


DEFAULT_GRIDSPEC = GridSpec()


def evaluate_complex(f: TrigPoly, t):
    t = np.asarray(t, dtype=float)
    if not len(f):
        return np.zeros_like(t, dtype=complex)
    return np.exp(1j * np.multiply.outer(t, f.ks)) @ f.cs


def evaluate(f: TrigPoly, t):
    """Real value ``sum_k c_k exp(i k t)``.

    Raises :class:`SymmetryError` when the imaginary part exceeds
    ``1e-12 * sum |c_k|``, i.e. when ``f`` is not real-valued.
    """
    z = evaluate_complex(f, t)
    bound = 1e-12 * max(f.l1_coeff(), np.finfo(float).tiny)
    if np.any(np.abs(np.imag(z)) > bound):
        raise SymmetryError("coefficients are not conjugate symmetric")
    out = np.real(z)
    return float(out) if out.ndim == 0 else out


def lp_norm(f: TrigPoly, p: float, grid: GridSpec = DEFAULT_GRIDSPEC) -> float:
    """Rectangle-rule ``(int_0^{2pi} |f|^p dt)^(1/p)`` for ``1 <= p < inf``."""
    if not 1 <= p < math.inf:
        raise ValueError(f"lp_norm needs 1 <= p < inf, got {p}")
    N = grid.resolve(f)
    a = np.abs(f.grid_values(N))
    if p == 2:
        return math.sqrt(TWO_PI / N * float(np.dot(a, a)))
    return (TWO_PI / N * float(np.sum(a**p))) ** (1.0 / p)


def parseval_l2(f: TrigPoly) -> float:
    """Exact ``||f||_2 = sqrt(2 pi sum |c_k|^2)``."""
    return math.sqrt(TWO_PI * f.energy())


@dataclass(frozen=True)
class SupNorm:
    """Certified lower bound ``value`` of ``max |f|`` and a bound on the shortfall."""

    value: float
    gap: float
    argmax: float

    @property
    def upper(self) -> float:
        return self.value + self.gap


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def sup_norm(f: TrigPoly, grid: GridSpec = DEFAULT_GRIDSPEC) -> SupNorm:
    """Sup norm of ``|f|`` from the grid plus golden-section polishing.

    Every evaluated point gives a lower bound.  The true maximiser lies
    within ``pi/N`` of a grid node and ``|f|`` is Lipschitz with constant
    ``sum |k c_k|`` (Bernstein), so ``gap = (pi/N) sum |k c_k|`` bounds the
    shortfall of the grid maximum, hence of the polished value too.
    """
    if not len(f):
        return SupNorm(0.0, 0.0, 0.0)
    N = grid.resolve(f)
    a = np.abs(f.grid_values(N))
    h = TWO_PI / N
    best_val, best_t = float(a.max()), float(a.argmax()) * h
    gap = math.pi / N * float(np.sum(np.abs(f.ks * f.cs)))
    if grid.refinement_depth > 0:
        for j in np.argsort(a)[-8:]:
            t, v = _golden_max(f, j * h - h, j * h + h, grid.refinement_depth)
            if v > best_val:
                best_val, best_t = v, t
    return SupNorm(best_val, max(0.0, float(a.max()) + gap - best_val), best_t % TWO_PI)


def _golden_max(f: TrigPoly, lo: float, hi: float, depth: int) -> tuple[float, float]:
    g = lambda t: abs(complex(evaluate_complex(f, t)))
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    for _ in range(depth):
        if g1 < g2:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLDEN * (hi - lo)
            g2 = g(x2)
        else:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLDEN * (hi - lo)
            g1 = g(x1)
    return (x1, g1) if g1 >= g2 else (x2, g2)


# -- frequency filters ---------------------------------------------------------


@dataclass(frozen=True)
class FrequencySet:
    """Sorted set of distinct signed integer frequencies."""

    members: tuple[int, ...]

    def __init__(self, members: Iterable[int] = ()):
        vals = [int(k) for k in members]
        if len(set(vals)) != len(vals):
            raise ValueError("frequency set has duplicates")
        object.__setattr__(self, "members", tuple(sorted(vals)))

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, k) -> bool:
        return int(k) in self.members


def partial_sum_order(f: TrigPoly, n: int) -> TrigPoly:
    """Fourier partial sum ``S_{n-1}``: keep ``|k| <= n - 1``."""
    keep = np.abs(f.ks) <= n - 1
    return TrigPoly.from_arrays(f.ks[keep], f.cs[keep])


def partial_sum_set(f: TrigPoly, gamma: Iterable[int]) -> TrigPoly:
    """Keep exactly the frequencies in ``gamma`` (no automatic ``-k``)."""
    keep = np.isin(f.ks, np.fromiter(gamma, dtype=np.int64))
    return TrigPoly.from_arrays(f.ks[keep], f.cs[keep])


def remove_frequencies(f: TrigPoly, gamma: Iterable[int]) -> TrigPoly:
    """``f - S_gamma f``."""
    drop = np.isin(f.ks, np.fromiter(gamma, dtype=np.int64))
    return TrigPoly.from_arrays(f.ks[~drop], f.cs[~drop])


# -- kernels and (psi, beta) multipliers ---------------------------------------


def vallee_poussin(m: int) -> TrigPoly:
    """``V_m(t) = 1/2 + sum_{k<=m} cos kt + 2 sum_{m<k<2m} (1 - k/2m) cos kt``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    d = {0: 0.5}
    for k in range(1, 2 * m):
        c = 0.5 if k <= m else 1.0 - k / (2.0 * m)
        d[k] = d[-k] = c
    return TrigPoly(d)


def quarter_phase(beta: float, sign: int) -> complex:
    """``exp(i sign beta pi / 2)``, exact when beta is an integer."""
    if float(beta).is_integer():
        return (1j) ** ((int(beta) * sign) % 4)
    return cmath.exp(1j * sign * beta * math.pi / 2.0)


def _phases(ks: np.ndarray, beta: float, direction: int) -> np.ndarray:
    pos, neg = quarter_phase(beta, direction), quarter_phase(beta, -direction)
    return np.where(ks > 0, pos, neg)


def psi_beta_derivative(f: TrigPoly, psi: PsiFunction, beta: float) -> TrigPoly:
    """Coefficients ``c_k exp(i beta pi/2 sign k) / psi(|k|)`` for ``k != 0``."""
    ks, cs = f.ks, f.cs
    nz = ks != 0
    ks, cs = ks[nz], cs[nz]
    out = cs * _phases(ks, beta, +1) / psi(np.abs(ks))
    return TrigPoly.from_arrays(ks, out)


def psi_beta_integral(f: TrigPoly, psi: PsiFunction, beta: float) -> TrigPoly:
    """Inverse multiplier ``c_k psi(|k|) exp(-i beta pi/2 sign k)``; drops ``k = 0``."""
    ks, cs = f.ks, f.cs
    nz = ks != 0
    ks, cs = ks[nz], cs[nz]
    out = cs * psi(np.abs(ks)) * _phases(ks, beta, -1)
    return TrigPoly.from_arrays(ks, out)


def psi_kernel_poly(psi: PsiFunction, beta: float, n_trunc: int) -> TrigPoly:
    """Truncated kernel ``sum_{k<=N} psi(k) cos(k t - beta pi/2)``.

    Convolution ``(1/pi) int K(x - t) phi(t) dt`` corresponds to the
    coefficient product ``2 K_k phi_k``; see :func:`convolve_kernel`.
    The dropped mass ``sum_{k>N} psi(k)`` is given by :func:`kernel_residue`.
    """
    k = np.arange(1, int(n_trunc) + 1)
    half = psi(k) / 2.0
    ks = np.concatenate([k, -k])
    cs = np.concatenate([half * quarter_phase(beta, -1), half * quarter_phase(beta, +1)])
    return TrigPoly.from_arrays(ks, cs)


def kernel_residue(psi: PsiFunction, n_trunc: int) -> float:
    """Certified upper bound on ``sum_{k > N} psi(k)`` (inf if divergent)."""
    from .errors import DivergenceError
    from .psi_families import tail_sum

    try:
        return tail_sum(psi, 1.0, int(n_trunc) + 1).high
    except DivergenceError:
        return math.inf


def convolve_kernel(kernel: TrigPoly, phi: TrigPoly) -> TrigPoly:
    """``(1/pi) int_{-pi}^{pi} kernel(x - t) phi(t) dt`` as ``2 K_k phi_k``."""
    common = np.intersect1d(kernel.ks, phi.ks)
    return TrigPoly((int(k), 2.0 * kernel.coeff(k) * phi.coeff(k)) for k in common)
