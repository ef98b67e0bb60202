"""Fourier transforms of finite sequences and certified extrema on the torus.

Every frequency-domain quantity handled here is a real trigonometric
polynomial ``f(xi) = sum_m c_m exp(2 pi i m xi)`` of known degree ``D``.  The
extrema of ``f`` are enclosed from samples on the uniform grid ``k / N`` plus
an additive pad: the smaller of the first-order bound ``L * Delta / 2`` and
the second-order bound ``M2 * Delta**2 / 8`` with

    L  = 2 pi     sum_m |m|   |c_m|      (bound on |f'|)
    M2 = (2 pi)^2 sum_m m**2  |c_m|      (bound on |f''|)

The second bound holds because the derivative vanishes at an interior
extremum and the nearest grid point is at most ``Delta / 2`` away.  The
coefficients are recovered exactly from the samples when ``N > 2 D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadParams, GridTooSmall
from .sequences import FiniteSequence, autocorrelation

DEFAULT_GRID = 4096
MAX_GRID = 1 << 21


@dataclass(frozen=True)
class GridSpec:
    """``N`` uniform samples ``xi_k = k / N`` of the unit interval."""

    N: int = DEFAULT_GRID

    def __post_init__(self):
        n = int(self.N)
        if n < 1 or n & (n - 1):
            raise BadParams(f"grid size must be a power of two, got {self.N}")
        object.__setattr__(self, "N", n)

    @property
    def delta(self) -> float:
        return 1.0 / self.N

    @property
    def xi(self) -> np.ndarray:
        return np.arange(self.N) / self.N

    @classmethod
    def for_degree(cls, degree: int, minimum: int = DEFAULT_GRID,
                   cap: int | None = None, oversample: int = 1) -> "GridSpec":
        """Smallest power of two above ``2 * oversample * degree``, at least ``minimum``."""
        n = max(int(minimum), 1)
        n = 1 << (n - 1).bit_length()
        while n <= 2 * oversample * degree:
            n *= 2
        if cap is not None:
            n = min(n, cap)
        return cls(n)


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval ``[lo, hi]`` together with the slack used to build it."""

    lo: float
    hi: float
    lipschitz_pad: float
    grid: GridSpec

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lipschitz_pad < 0:
            raise ValueError("pad must be nonnegative")

    @property
    def inf_enclosure(self) -> tuple[float, float]:
        """Enclosure of the infimum of the certified function."""
        return self.lo, self.lo + self.lipschitz_pad

    @property
    def sup_enclosure(self) -> tuple[float, float]:
        """Enclosure of the supremum of the certified function."""
        return self.hi - self.lipschitz_pad, self.hi

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "pad": self.lipschitz_pad, "grid": self.grid.N}


# -- evaluation --------------------------------------------------------------

def eval_ft(x: FiniteSequence, xi):
    """``sum_n x(n) exp(-2 pi i n xi)``; ``xi`` may be a scalar or an array."""
    xi_arr = np.asarray(xi, dtype=float)
    phase = np.exp(-2j * np.pi * np.multiply.outer(xi_arr, x.indices))
    out = phase @ x.taps
    return complex(out) if xi_arr.ndim == 0 else out


def eval_ft_grid(x: FiniteSequence, grid: GridSpec) -> np.ndarray:
    """Values of the Fourier transform at ``k / N`` via a zero-padded FFT."""
    if len(x) > grid.N:
        raise GridTooSmall(f"support length {len(x)} exceeds grid size {grid.N}")
    buf = np.zeros(grid.N)
    buf[np.mod(x.indices, grid.N)] = x.taps
    return np.fft.fft(buf)


def dyadic_indices(grid: GridSpec, m: int) -> np.ndarray:
    """Grid index of ``2**m * xi_k`` modulo one, for every ``k``."""
    k = np.arange(grid.N, dtype=np.int64)
    return (k << m) & (grid.N - 1) if m < 62 else np.zeros(grid.N, dtype=np.int64)


# -- certification -----------------------------------------------------------

def trig_coefficients(samples: np.ndarray, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``c_m``, ``|m| <= degree``, of a real trigonometric polynomial.

    Parameters
    ----------
    samples : ndarray
        Values at ``k / N``.
    degree : int
        Known degree; requires ``N > 2 * degree``.

    Returns
    -------
    m : ndarray of int
    c : ndarray of complex
    """
    n = samples.size
    if n <= 2 * degree:
        raise GridTooSmall(f"grid of {n} points cannot resolve degree {degree}")
    coeffs = np.fft.ifft(samples)
    m = np.arange(-degree, degree + 1)
    return m, coeffs[np.mod(m, n)]


def derivative_bounds(m: np.ndarray, c: np.ndarray) -> tuple[float, float]:
    """``(sup|f'|, sup|f''|)`` upper bounds from the coefficient moduli."""
    a = np.abs(c)
    am = np.abs(m).astype(float)
    return 2 * np.pi * float(np.sum(am * a)), (2 * np.pi) ** 2 * float(np.sum(am * am * a))


def pad_for(lip: float, curv: float, delta: float) -> float:
    return min(lip * delta / 2, curv * delta * delta / 8)


def certify_samples(samples: np.ndarray, degree: int, grid: GridSpec) -> CertifiedInterval:
    """Enclose inf and sup over the torus of a real trigonometric polynomial.

    Returns ``[min - pad, max + pad]`` where min and max are taken over the
    grid samples.
    """
    values = np.real(samples)
    m, c = trig_coefficients(values, degree)
    pad = pad_for(*derivative_bounds(m, c), grid.delta)
    return CertifiedInterval(float(values.min()) - pad, float(values.max()) + pad, pad, grid)


def _cells(grid: GridSpec, a: float, b: float) -> np.ndarray:
    """Left indices of grid cells ``[xi_k, xi_k+1]`` meeting ``(a, b)``, ``0 <= a < b <= 1``."""
    n = grid.N
    k0 = max(int(np.floor(a * n)), 0)
    k1 = min(int(np.ceil(b * n)), n)
    return np.arange(k0, k1)


def cell_lower_bounds(values: np.ndarray, lip: float, curv: float, grid: GridSpec,
                      a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell lower bounds of ``f`` over the cells meeting ``(a, b)``.

    Uses the better of the chord bound ``(f_k + f_k+1)/2 - L Delta / 2`` and
    the curvature bound ``min(f_k, f_k+1) - M2 Delta**2 / 8``.
    """
    k = _cells(grid, a, b)
    left = values[k]
    right = values[(k + 1) % grid.N]
    d = grid.delta
    lb = np.maximum(0.5 * (left + right) - lip * d / 2,
                    np.minimum(left, right) - curv * d * d / 8)
    return k, lb


def cell_upper_bounds(values: np.ndarray, lip: float, curv: float, grid: GridSpec,
                      a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    k, lb = cell_lower_bounds(-values, lip, curv, grid, a, b)
    return k, -lb


def certified_range(terms: Sequence[FiniteSequence],
                    grid: GridSpec | None = None) -> CertifiedInterval:
    """Certified enclosure of ``inf`` and ``sup`` of ``sum_i |x_i^(xi)|**2``.

    Parameters
    ----------
    terms : sequence of FiniteSequence
    grid : GridSpec, optional
        Defaults to the smallest adequate power of two, at least 4096.

    Raises
    ------
    GridTooSmall
        If ``grid.N`` does not exceed twice the degree of the sum.
    """
    terms = list(terms)
    if not terms:
        raise BadParams("at least one term is required")
    degree = max(len(t) - 1 for t in terms)
    if grid is None:
        grid = GridSpec.for_degree(degree)
    if grid.N <= 2 * degree:
        raise GridTooSmall(f"grid size {grid.N} must exceed twice the degree {degree}")
    total = np.zeros(grid.N)
    for t in terms:
        v = eval_ft_grid(t, grid)
        total += v.real ** 2 + v.imag ** 2
    return certify_samples(total, degree, grid)


def frame_coefficients(terms: Sequence[FiniteSequence], max_lag: int) -> np.ndarray:
    """Coefficients of ``sum_i |x_i^|**2`` at lags ``-max_lag .. max_lag``."""
    out = np.zeros(2 * max_lag + 1)
    for t in terms:
        r = autocorrelation(t)
        lo = max(r.offset, -max_lag)
        hi = min(r.stop, max_lag + 1)
        if lo < hi:
            out[lo + max_lag:hi + max_lag] += r.values_on(lo, hi)
    return out


def quadrature_energy(terms: Sequence[FiniteSequence], x: FiniteSequence) -> float:
    """Exact value of the integral of ``Phi |x^|**2`` over the torus.

    ``Phi = sum_i |x_i^|**2``.  The integral is evaluated in the coefficient
    domain, ``sum_m c_Phi(m) r_x(m)`` with ``r_x`` the autocorrelation of
    ``x``, which equals uniform-grid quadrature with any ``N`` above the
    total degree.
    """
    lag = len(x) - 1
    c_phi = frame_coefficients(terms, lag)
    r = autocorrelation(x).values_on(-lag, lag + 1)
    r[lag] = np.sum(x.taps * x.taps)
    if not np.any(c_phi[:lag]) and not np.any(c_phi[lag + 1:]):
        return float(c_phi[lag] * r[lag])
    return float(np.sum(c_phi * r))


def haar_factor_bound_check(J: int, grid: GridSpec | None = None) -> bool:
    """Check ``|prod_k (1 + e^{2 pi i 2^k xi}) / 2| <= min(1, 1 / (2^{J+1} |xi|))``.

    The product runs over ``k = 0 .. J-1`` and the check is made at every
    grid point of ``[-1/2, 1/2)``.
    """
    if not 1 <= J <= 20:
        raise BadParams("J must lie in 1..20")
    grid = grid or GridSpec(8192)
    xi = grid.xi - 0.5
    prod = np.ones(grid.N, dtype=complex)
    for k in range(J):
        prod *= (1 + np.exp(2j * np.pi * (2 ** k) * xi)) / 2
    with np.errstate(divide="ignore"):
        bound = np.minimum(1.0, 1.0 / (2.0 ** (J + 1) * np.abs(xi)))
    return bool(np.all(np.abs(prod) <= bound * (1 + 1e-12) + 1e-15))
