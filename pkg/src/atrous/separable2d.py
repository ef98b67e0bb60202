"""Two-dimensional sequences and separable products of one-dimensional banks.

The Fourier transform on ``Z^2`` is
``X^(xi1, xi2) = sum x(k1, k2) exp(-2 pi i (k1 xi1 + k2 xi2))``; rows index
``k1`` and columns ``k2``.  Filters are stored densely since every support
here is small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.chebyshev import chebval
from scipy.signal import convolve2d, fftconvolve

from .errors import BadParams, DepthLimit, GridTooSmall, InvalidFilterBank, PyramidShape
from .filterbank import FilterBank, FrameReport
from .sequences import FiniteSequence, autocorrelation
from .spectrum import CertifiedInterval, GridSpec

MAX_DEPTH_2D = 10
_DIRECT_LIMIT = 1_000_000


@dataclass(frozen=True, eq=False)
class FiniteSequence2D:
    """Real array ``x(k1, k2)`` whose ``[0, 0]`` entry sits at index ``offset``."""

    offset: tuple[int, int]
    taps: np.ndarray

    def __post_init__(self):
        taps = np.array(self.taps, dtype=float)
        if taps.ndim != 2 or taps.size == 0:
            taps = np.zeros((1, 1))
        if not np.all(np.isfinite(taps)):
            raise ValueError("taps must be finite")
        r0, c0 = int(self.offset[0]), int(self.offset[1])
        rows = np.flatnonzero(np.any(taps != 0, axis=1))
        cols = np.flatnonzero(np.any(taps != 0, axis=0))
        if rows.size == 0:
            r0, c0, taps = 0, 0, np.zeros((1, 1))
        else:
            taps = taps[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1].copy()
            r0, c0 = r0 + int(rows[0]), c0 + int(cols[0])
        taps.setflags(write=False)
        object.__setattr__(self, "offset", (r0, c0))
        object.__setattr__(self, "taps", taps)

    @property
    def shape(self) -> tuple[int, int]:
        return self.taps.shape

    def __eq__(self, other):
        if not isinstance(other, FiniteSequence2D):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.taps, other.taps)

    def __hash__(self):
        return hash((self.offset, self.taps.tobytes()))

    def is_zero(self) -> bool:
        return self.taps.shape == (1, 1) and self.taps[0, 0] == 0.0

    def energy(self) -> float:
        return float(np.sum(self.taps * self.taps))

    def values_on(self, r: tuple[int, int], c: tuple[int, int]) -> np.ndarray:
        out = np.zeros((r[1] - r[0], c[1] - c[0]))
        (r0, c0), (nr, nc) = self.offset, self.taps.shape
        rl, rh = max(r[0], r0), min(r[1], r0 + nr)
        cl, ch = max(c[0], c0), min(c[1], c0 + nc)
        if rl < rh and cl < ch:
            out[rl - r[0]:rh - r[0], cl - c[0]:ch - c[0]] = \
                self.taps[rl - r0:rh - r0, cl - c0:ch - c0]
        return out

    def __add__(self, other: "FiniteSequence2D") -> "FiniteSequence2D":
        r = (min(self.offset[0], other.offset[0]),
             max(self.offset[0] + self.shape[0], other.offset[0] + other.shape[0]))
        c = (min(self.offset[1], other.offset[1]),
             max(self.offset[1] + self.shape[1], other.offset[1] + other.shape[1]))
        return FiniteSequence2D((r[0], c[0]), self.values_on(r, c) + other.values_on(r, c))

    def __neg__(self) -> "FiniteSequence2D":
        return FiniteSequence2D(self.offset, -self.taps)

    def __sub__(self, other: "FiniteSequence2D") -> "FiniteSequence2D":
        return self + (-other)

    @classmethod
    def delta(cls) -> "FiniteSequence2D":
        return cls((0, 0), np.ones((1, 1)))


def outer(x: FiniteSequence, y: FiniteSequence) -> FiniteSequence2D:
    """``H(k1, k2) = x(k1) y(k2)``."""
    return FiniteSequence2D((x.offset, y.offset), np.outer(x.taps, y.taps))


def convolve_2d(x: FiniteSequence2D, y: FiniteSequence2D) -> FiniteSequence2D:
    if x.is_zero() or y.is_zero():
        return FiniteSequence2D((0, 0), np.zeros((1, 1)))
    off = (x.offset[0] + y.offset[0], x.offset[1] + y.offset[1])
    if x.taps.size * y.taps.size <= _DIRECT_LIMIT:
        return FiniteSequence2D(off, convolve2d(x.taps, y.taps))
    return FiniteSequence2D(off, fftconvolve(x.taps, y.taps))


def upsample_2d(x: FiniteSequence2D, m: int = 1) -> FiniteSequence2D:
    """Move ``x(k1, k2)`` to ``(2**m k1, 2**m k2)``."""
    if m == 0 or x.is_zero():
        return x
    s = 1 << m
    nr, nc = x.shape
    taps = np.zeros(((nr - 1) * s + 1, (nc - 1) * s + 1))
    taps[::s, ::s] = x.taps
    return FiniteSequence2D((x.offset[0] * s, x.offset[1] * s), taps)


def involute_2d(x: FiniteSequence2D) -> FiniteSequence2D:
    nr, nc = x.shape
    return FiniteSequence2D((-(x.offset[0] + nr - 1), -(x.offset[1] + nc - 1)), x.taps[::-1, ::-1])


def translate_2d(x: FiniteSequence2D, k1: int, k2: int) -> FiniteSequence2D:
    return FiniteSequence2D((x.offset[0] + k1, x.offset[1] + k2), x.taps)


def eval_ft_2d(x: FiniteSequence2D, xi1: float, xi2: float) -> complex:
    k1 = np.arange(x.offset[0], x.offset[0] + x.shape[0])
    k2 = np.arange(x.offset[1], x.offset[1] + x.shape[1])
    e1 = np.exp(-2j * np.pi * k1 * xi1)
    e2 = np.exp(-2j * np.pi * k2 * xi2)
    return complex(e1 @ x.taps @ e2)


def eval_ft_grid_2d(x: FiniteSequence2D, grid: GridSpec) -> np.ndarray:
    n = grid.N
    if max(x.shape) > n:
        raise GridTooSmall(f"support {x.shape} exceeds grid size {n}")
    buf = np.zeros((n, n))
    rows = np.mod(np.arange(x.offset[0], x.offset[0] + x.shape[0]), n)
    cols = np.mod(np.arange(x.offset[1], x.offset[1] + x.shape[1]), n)
    buf[np.ix_(rows, cols)] = x.taps
    return np.fft.fft2(buf)


@dataclass(frozen=True)
class FilterBank2D:
    """Filters ``H^{l,m}``; the ``(0, 0)`` member is the low-pass filter.

    ``factors`` records the two 1-D banks when the bank is a separable
    product; certification then evaluates ``Q`` off the grid cheaply.
    """

    filters: dict
    factors: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if (0, 0) not in self.filters or len(self.filters) < 2:
            raise InvalidFilterBank("need a (0, 0) low-pass filter and at least one other")
        for key, f in self.filters.items():
            v = eval_ft_2d(f, 0.0, 0.0)
            target = 1.0 if key == (0, 0) else 0.0
            if abs(v - target) > 1e-6:
                raise InvalidFilterBank(f"filter {key} has H^(0,0) = {v.real:.3g}")

    @property
    def lowpass(self) -> FiniteSequence2D:
        return self.filters[(0, 0)]

    def highpass_keys(self) -> list[tuple[int, int]]:
        return sorted(k for k in self.filters if k != (0, 0))


def separable_product(bank_x: FilterBank, bank_y: FilterBank) -> FilterBank2D:
    """``H^{l,m} = x^l (outer) y^m`` with index 0 for the low-pass filters."""
    fx, fy = bank_x.filters(), bank_y.filters()
    return FilterBank2D({(l, m): outer(a, b) for l, a in enumerate(fx) for m, b in enumerate(fy)},
                        factors=(bank_x, bank_y))


def _check_depth(J: int):
    if J < 1:
        raise BadParams("order must be at least 1")
    if J > MAX_DEPTH_2D:
        raise DepthLimit(f"order {J} exceeds the 2-D limit of {MAX_DEPTH_2D}")


def iterated_filters_2d(bank: FilterBank2D, J: int
                        ) -> tuple[FiniteSequence2D, dict[tuple[int, tuple[int, int]], FiniteSequence2D]]:
    """``H^0_J`` and ``{(j, key): H^0_{j-1} * U^{j-1} H^key}`` for ``j = 1..J``."""
    _check_depth(J)
    low = FiniteSequence2D.delta()
    out = {}
    for j in range(1, J + 1):
        for key in bank.highpass_keys():
            out[(j, key)] = convolve_2d(low, upsample_2d(bank.filters[key], j - 1))
        low = convolve_2d(low, upsample_2d(bank.lowpass, j - 1))
    return low, out


@dataclass(frozen=True)
class Pyramid2D:
    J: int
    details: dict
    approximation: FiniteSequence2D

    def energy(self) -> float:
        return float(sum(d.energy() for d in self.details.values()) + self.approximation.energy())


def analyze_2d(bank: FilterBank2D, x: FiniteSequence2D, J: int) -> Pyramid2D:
    """Branches ``x * involute(H^key_j)`` and ``x * involute(H^0_J)`` via the cascade."""
    _check_depth(J)
    bars = {k: involute_2d(f) for k, f in bank.filters.items()}
    details = {}
    approx = x
    for j in range(1, J + 1):
        for key in bank.highpass_keys():
            details[(j, key)] = convolve_2d(approx, upsample_2d(bars[key], j - 1))
        approx = convolve_2d(approx, upsample_2d(bars[(0, 0)], j - 1))
    return Pyramid2D(J, details, approx)


def synthesize_2d(bank: FilterBank2D, pyr: Pyramid2D) -> FiniteSequence2D:
    """Adjoint of :func:`analyze_2d`."""
    keys = bank.highpass_keys()
    expected = {(j, k) for j in range(1, pyr.J + 1) for k in keys}
    if set(pyr.details) != expected:
        raise PyramidShape("pyramid does not match the bank")
    y = pyr.approximation
    for j in range(pyr.J, 0, -1):
        y = convolve_2d(y, upsample_2d(bank.lowpass, j - 1))
        for key in keys:
            y = y + convolve_2d(pyr.details[(j, key)], upsample_2d(bank.filters[key], j - 1))
    return y


def frame_degree_2d(bank: FilterBank2D, J: int) -> int:
    dl = max(bank.lowpass.shape) - 1
    dh = max(max(bank.filters[k].shape) - 1 for k in bank.highpass_keys())
    deg = max((2 ** (j - 1) - 1) * dl + 2 ** (j - 1) * dh for j in range(1, J + 1))
    return max(deg, (2 ** J - 1) * dl)


def frame_samples_2d(bank: FilterBank2D, J: int, grid: GridSpec) -> np.ndarray:
    """Grid samples of the 2-D frame function ``Q``."""
    n = grid.N
    k = np.arange(n, dtype=np.int64)
    low_s = np.abs(eval_ft_grid_2d(bank.lowpass, grid)) ** 2
    high_s = sum(np.abs(eval_ft_grid_2d(bank.filters[key], grid)) ** 2
                 for key in bank.highpass_keys())
    low = np.ones((n, n))
    total = np.zeros((n, n))
    for j in range(J):
        idx = (k << j) & (n - 1)
        sel = np.ix_(idx, idx)
        total += low * high_s[sel]
        low = low * low_s[sel]
    return total + low


def _power_series(x: FiniteSequence) -> np.ndarray:
    """Chebyshev coefficients of ``|x^(xi)|**2`` in ``cos(2 pi xi)``."""
    r = autocorrelation(x).values_on(0, len(x))
    r[1:] *= 2
    return r


def _axis_factors(bank: FilterBank, J: int, xi: np.ndarray):
    """Per-level ``|h^|**2`` and ``sum_l |x^l^|**2`` at ``2**(j-1) xi``."""
    low = _power_series(bank.lowpass)
    parts = [_power_series(g) for g in bank.highpass]
    high = np.zeros(max(map(len, parts)))
    for c in parts:
        high[:len(c)] += c
    out = []
    for j in range(J):
        c = np.cos((2 * np.pi * 2.0 ** j) * xi)
        out.append((chebval(c, low), chebval(c, high)))
    return out


def separable_q(bank_x: FilterBank, bank_y: FilterBank, J: int,
                xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    """``Q`` on the tensor grids ``xi1[p] x xi2[p]`` for every batch row ``p``.

    Each level contributes ``a b (SX SY - X0 Y0)`` where ``a, b`` are the
    iterated low-pass moduli and ``SX = X0 + sum_l Xl`` is the one-level
    frame function of the first bank; the sum over all filter pairs other
    than the low-pass pair is thereby computed from two outer products.
    """
    fx, fy = _axis_factors(bank_x, J, xi1), _axis_factors(bank_y, J, xi2)
    a = np.ones(xi1.shape)
    b = np.ones(xi2.shape)
    q = np.zeros(xi1.shape + xi2.shape[-1:])
    for (x0, xh), (y0, yh) in zip(fx, fy):
        q += np.einsum("ps,pt->pst", a * (x0 + xh), b * (y0 + yh))
        a, b = a * x0, b * y0
        q -= np.einsum("ps,pt->pst", a, b)
    return q + np.einsum("ps,pt->pst", a, b)


def _refine(bank: FilterBank2D, J: int, q: np.ndarray, grid: GridSpec, slope: float,
            curv: float, sign: float, target: float, budget: int,
            split: int = 4) -> tuple[float, float]:
    """Branch and bound for ``min`` of ``sign * Q`` starting from the grid samples.

    A box of half-width ``w`` around a sample point can hide values lower
    than the sample by at most ``min(slope w, curv w**2 / 2)``; boxes whose
    sample exceeds the running minimum by more than that are discarded and
    the rest are split ``split x split``.
    """
    def pad(w):
        return min(slope * w, curv * w * w / 2)

    f = sign * q
    best = float(f.min())
    w = grid.delta / 2
    keep = np.argwhere(f <= best + pad(w))
    centers = keep.astype(float) * grid.delta
    bx, by = bank.factors
    while pad(w) > target and 0 < len(centers) <= budget:
        offs = (np.arange(split) + 0.5) * (2 * w / split) - w
        w = w / split
        vals = []
        for chunk in np.array_split(centers, max(1, len(centers) // 4096)):
            xi1 = chunk[:, :1] + offs
            xi2 = chunk[:, 1:] + offs
            vals.append(sign * separable_q(bx, by, J, xi1, xi2))
        vals = np.concatenate(vals)
        best = min(best, float(vals.min()))
        idx = np.argwhere(vals <= best + pad(w))
        centers = np.stack([centers[idx[:, 0], 0] + offs[idx[:, 1]],
                            centers[idx[:, 0], 1] + offs[idx[:, 2]]], axis=1)
    return sign * (best - pad(w)), pad(w)


def frame_bounds_2d(bank: FilterBank2D, J: int, grid: GridSpec | None = None,
                    target_pad: float = 1e-8, budget: int = 4_000_000) -> FrameReport:
    """Certified extrema of ``Q = |H^0_J^|**2 + sum_j sum_key |H^key_j^|**2``.

    Grid samples are padded by the smaller of ``(L1 + L2) Delta / 2``
    (partial-derivative bounds) and ``(M11 + 2 M12 + M22) Delta**2 / 8``
    (Hessian bound), all read off the 2-D coefficients of ``Q``.  For
    separable products the cells that may still hold an extremum are then
    refined until the pad drops below ``target_pad`` or more than ``budget``
    cells survive.
    """
    _check_depth(J)
    degree = frame_degree_2d(bank, J)
    if grid is None:
        grid = GridSpec.for_degree(degree, minimum=256, oversample=2)
        if grid.N > 4096:
            grid = GridSpec.for_degree(degree, minimum=256)
    if grid.N <= 2 * degree:
        raise GridTooSmall(f"grid size {grid.N} must exceed twice the degree {degree}")
    q = frame_samples_2d(bank, J, grid)
    coeffs = np.fft.ifft2(q)
    m = np.arange(-degree, degree + 1)
    idx = np.mod(m, grid.N)
    a = np.abs(coeffs[np.ix_(idx, idx)])
    m1 = np.abs(m).astype(float)[:, None]
    m2 = np.abs(m).astype(float)[None, :]
    two_pi = 2 * np.pi
    slope = two_pi * (np.sum(m1 * a) + np.sum(m2 * a))
    curv = two_pi ** 2 * (np.sum(m1 * m1 * a) + 2 * np.sum(m1 * m2 * a) + np.sum(m2 * m2 * a))
    d = grid.delta
    lo, hi = float(q.min()), float(q.max())
    pad = float(min(slope * d / 2, curv * d * d / 8))
    lo_c, hi_c, pad_lo, pad_hi = lo - pad, hi + pad, pad, pad
    if bank.factors is not None and pad > target_pad:
        lo_c, pad_lo = _refine(bank, J, q, grid, slope, curv, 1.0, target_pad, budget)
        hi_c, pad_hi = _refine(bank, J, q, grid, slope, curv, -1.0, target_pad, budget)
        lo_c, hi_c = max(lo_c, lo - pad), min(hi_c, hi + pad)
    A = CertifiedInterval(lo_c, lo_c + pad_lo, pad_lo, grid)
    B = CertifiedInterval(hi_c - pad_hi, hi_c, pad_hi, grid)
    return FrameReport(J=J, infinite=False, A=A, B=B,
                       parseval_deviation=max(B.hi - 1.0, 1.0 - A.lo, 0.0))


def quadrature_energy_2d(bank: FilterBank2D, J: int, x: FiniteSequence2D,
                         grid: GridSpec | None = None) -> float:
    """``int Q |X^|**2`` by uniform-grid quadrature, exact for ``N`` above the total degree."""
    degree = frame_degree_2d(bank, J) + max(x.shape) - 1
    grid = grid or GridSpec.for_degree(degree, minimum=64)
    if grid.N <= degree:
        raise GridTooSmall("grid too small for exact quadrature")
    q = frame_samples_2d(bank, J, grid)
    xs = np.abs(eval_ft_grid_2d(x, grid)) ** 2
    return float(np.mean(q * xs))
