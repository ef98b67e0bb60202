"""Finitely supported real sequences on the integers.

A :class:`FiniteSequence` stores the first index (``offset``) and the run of
taps starting there.  Every constructor returns the canonical form: leading
and trailing taps equal to exactly zero are removed, and the zero sequence is
a single ``0.0`` at offset 0.  Only exact zeros are trimmed; use
:func:`prune` for display-style thresholding.

The operators follow the usual filter bank notation::

    (x * y)(k) = sum_n y(n) x(k - n)          convolve
    (T^k x)(n) = x(n - k)                     translate
    x~(k)      = x(-k)                        involute
    (U x)(2k)  = x(k), zero at odd indices    upsample

with Fourier transform ``x^(xi) = sum_n x(n) exp(-2 pi i n xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.signal import fftconvolve

# direct convolution below this many multiply-adds, FFT above
_DIRECT_LIMIT = 4_000_000
# shift-and-add path for operands with few nonzero taps (upsampled filters)
_SPARSE_LIMIT = 64


def _canonical(offset: int, taps: np.ndarray) -> tuple[int, np.ndarray]:
    nz = np.flatnonzero(taps)
    if nz.size == 0:
        return 0, np.zeros(1)
    first, last = int(nz[0]), int(nz[-1])
    return offset + first, taps[first:last + 1].copy()


@dataclass(frozen=True, eq=False)
class FiniteSequence:
    """Real sequence ``x(k)`` supported on ``offset .. offset + len(taps) - 1``."""

    offset: int
    taps: np.ndarray = field(repr=False)

    def __post_init__(self):
        taps = np.array(self.taps, dtype=float).ravel()
        if taps.size == 0:
            taps = np.zeros(1)
        if not np.all(np.isfinite(taps)):
            raise ValueError("sequence taps must be finite")
        offset, taps = _canonical(int(self.offset), taps)
        taps.setflags(write=False)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "taps", taps)

    # -- construction -------------------------------------------------------

    @classmethod
    def delta(cls, k: int = 0, value: float = 1.0) -> "FiniteSequence":
        return cls(k, [value])

    @classmethod
    def zero(cls) -> "FiniteSequence":
        return cls(0, [0.0])

    @classmethod
    def from_mapping(cls, values: dict[int, float]) -> "FiniteSequence":
        if not values:
            return cls.zero()
        lo, hi = min(values), max(values)
        taps = np.zeros(hi - lo + 1)
        for k, v in values.items():
            taps[k - lo] = v
        return cls(lo, taps)

    @classmethod
    def centered(cls, taps: Sequence[float]) -> "FiniteSequence":
        """Place ``taps`` so the middle tap (left-middle for even lengths) sits at 0."""
        taps = np.asarray(taps, dtype=float)
        return cls(-((taps.size - 1) // 2), taps)

    # -- basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return self.taps.size

    @property
    def stop(self) -> int:
        """One past the last supported index."""
        return self.offset + self.taps.size

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.stop)

    def is_zero(self) -> bool:
        return self.taps.size == 1 and self.taps[0] == 0.0

    def __getitem__(self, k: int) -> float:
        i = k - self.offset
        if 0 <= i < self.taps.size:
            return float(self.taps[i])
        return 0.0

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.taps))

    def energy(self) -> float:
        """Squared l2 norm (numpy pairwise summation)."""
        return float(np.sum(self.taps * self.taps))

    def norm(self) -> float:
        return float(np.sqrt(self.energy()))

    def l1(self) -> float:
        return float(np.sum(np.abs(self.taps)))

    def values_on(self, start: int, stop: int) -> np.ndarray:
        """Dense copy of ``x(start), ..., x(stop - 1)``."""
        out = np.zeros(stop - start)
        lo, hi = max(start, self.offset), min(stop, self.stop)
        if lo < hi:
            out[lo - start:hi - start] = self.taps[lo - self.offset:hi - self.offset]
        return out

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FiniteSequence):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.taps, other.taps)

    def __hash__(self):
        return hash((self.offset, self.taps.tobytes()))

    def __repr__(self):
        body = ", ".join(f"{t:.10g}" for t in self.taps[:12])
        if self.taps.size > 12:
            body += ", ..."
        return f"FiniteSequence(offset={self.offset}, taps=[{body}])"

    def _binary(self, other: "FiniteSequence", sign: float) -> "FiniteSequence":
        lo, hi = min(self.offset, other.offset), max(self.stop, other.stop)
        return FiniteSequence(lo, self.values_on(lo, hi) + sign * other.values_on(lo, hi))

    def __add__(self, other: "FiniteSequence") -> "FiniteSequence":
        return self._binary(other, 1.0)

    def __sub__(self, other: "FiniteSequence") -> "FiniteSequence":
        return self._binary(other, -1.0)

    def __neg__(self) -> "FiniteSequence":
        return FiniteSequence(self.offset, -self.taps)

    def __mul__(self, c: float) -> "FiniteSequence":
        return FiniteSequence(self.offset, float(c) * self.taps)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"offset": self.offset, "taps": [float(t) for t in self.taps]}

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteSequence":
        return cls(int(d["offset"]), [float(t) for t in d["taps"]])


# -- operators ---------------------------------------------------------------

def _sparse_convolve(dense: FiniteSequence, sparse: FiniteSequence) -> FiniteSequence:
    nz = np.flatnonzero(sparse.taps)
    out = np.zeros(dense.taps.size + sparse.taps.size - 1)
    n = dense.taps.size
    for i in nz:
        out[i:i + n] += sparse.taps[i] * dense.taps
    return FiniteSequence(dense.offset + sparse.offset, out)


def convolve(x: FiniteSequence, y: FiniteSequence) -> FiniteSequence:
    """``(x * y)(k) = sum_n y(n) x(k - n)``; supports add, offsets add."""
    if x.is_zero() or y.is_zero():
        return FiniteSequence.zero()
    if y.nonzero_count() <= _SPARSE_LIMIT and y.nonzero_count() <= x.nonzero_count():
        return _sparse_convolve(x, y)
    if x.nonzero_count() <= _SPARSE_LIMIT:
        return _sparse_convolve(y, x)
    if x.taps.size * y.taps.size <= _DIRECT_LIMIT:
        taps = np.convolve(x.taps, y.taps)
    else:
        taps = fftconvolve(x.taps, y.taps)
    return FiniteSequence(x.offset + y.offset, taps)


def convolve_all(seqs: Iterable[FiniteSequence]) -> FiniteSequence:
    out = FiniteSequence.delta()
    for s in seqs:
        out = convolve(out, s)
    return out


def upsample(x: FiniteSequence, m: int = 1) -> FiniteSequence:
    """Apply ``U`` ``m`` times: ``x(k)`` moves to index ``2**m * k``."""
    if m < 0:
        raise ValueError("upsampling exponent must be nonnegative")
    if m == 0 or x.is_zero():
        return x
    step = 1 << m
    taps = np.zeros((x.taps.size - 1) * step + 1)
    taps[::step] = x.taps
    return FiniteSequence(x.offset * step, taps)


def involute(x: FiniteSequence) -> FiniteSequence:
    """Time reversal ``x(-k)`` (conjugation is trivial for real taps)."""
    return FiniteSequence(-(x.stop - 1), x.taps[::-1])


def translate(x: FiniteSequence, k: int) -> FiniteSequence:
    return FiniteSequence(x.offset + int(k), x.taps)


def modulate_half(x: FiniteSequence) -> FiniteSequence:
    """``(-1)**k x(k)``, i.e. the Fourier transform shifted by one half."""
    signs = np.where(x.indices % 2 == 0, 1.0, -1.0)
    return FiniteSequence(x.offset, signs * x.taps)


def inner(x: FiniteSequence, y: FiniteSequence) -> float:
    lo, hi = max(x.offset, y.offset), min(x.stop, y.stop)
    if lo >= hi:
        return 0.0
    return float(np.sum(x.values_on(lo, hi) * y.values_on(lo, hi)))


def autocorrelation(x: FiniteSequence) -> FiniteSequence:
    """Coefficients of ``|x^(xi)|**2`` as a trigonometric polynomial (``x * involute(x)``)."""
    r = np.correlate(x.taps, x.taps, mode="full") if x.taps.size > 1 else x.taps * x.taps
    return FiniteSequence(-(x.taps.size - 1), r)


def prune(x: FiniteSequence, tol: float) -> FiniteSequence:
    """Zero taps with ``|x(k)| <= tol``; meant for display only."""
    taps = np.where(np.abs(x.taps) <= tol, 0.0, x.taps)
    return FiniteSequence(x.offset, taps)


def equal_up_to_translation(x: FiniteSequence, y: FiniteSequence, tol: float = 0.0) -> bool:
    if len(x) != len(y):
        return False
    return bool(np.max(np.abs(x.taps - y.taps)) <= tol)
