"""Iterated filter banks: transforms, frame bounds and stability certificates.

A bank is one low-pass filter ``h`` and high-pass filters ``g^1 .. g^L``.  The
iterated filters are

    h_j   = h * U h * ... * U^{j-1} h          (h_0 = delta)
    g^l_j = h_{j-1} * U^{j-1} g^l

and the order-``J`` analysis operator maps ``x`` to the branches
``x * involute(g^l_j)`` for ``j <= J`` together with ``x * involute(h_J)``.
Its frame bounds are the essential extrema of

    Phi_J = |h_J^|**2 + sum_{j <= J} sum_l |g^l_j^|**2.

On the grid ``k / N`` the iterated transforms are evaluated without forming
the long filters, since ``h^(2^m xi_k)`` is the FFT sample at ``k 2^m mod N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (BadBounds, BadParams, DepthLimit, GridTooSmall, InvalidFilterBank, NoConvergence,
                     NotLowPass, PyramidShape)
from .sequences import FiniteSequence, convolve, involute, translate, upsample
from .sequences import inner as seq_inner
from .spectrum import (MAX_GRID, CertifiedInterval, GridSpec, cell_lower_bounds,
                       certify_samples, derivative_bounds, dyadic_indices, eval_ft,
                       eval_ft_grid, pad_for, trig_coefficients)

MAX_DEPTH = 24
LOWPASS_TOL = 1e-6
# log-slope window of the divergence heuristic
DIVERGENCE_WINDOW = 5
# default frame-function grids sample 4x finer than the coefficient limit
DEFAULT_OVERSAMPLE = 4


@dataclass(frozen=True)
class FilterBank:
    """Low-pass filter ``h`` and high-pass filters ``g^1 .. g^L``.

    Raises
    ------
    InvalidFilterBank
        Unless ``h^(0) = 1``, ``h^(1/2) = 0`` and ``g^(0) = 0`` for every
        high-pass filter, each within ``1e-6``.
    """

    lowpass: FiniteSequence
    highpass: tuple[FiniteSequence, ...]
    name: str = ""

    def __post_init__(self):
        hp = tuple(self.highpass)
        object.__setattr__(self, "highpass", hp)
        if not hp:
            raise InvalidFilterBank("a bank needs at least one high-pass filter")
        h0 = eval_ft(self.lowpass, 0.0)
        hh = eval_ft(self.lowpass, 0.5)
        if abs(h0 - 1) > LOWPASS_TOL or abs(hh) > LOWPASS_TOL:
            raise InvalidFilterBank(
                f"low-pass filter needs h^(0)=1 and h^(1/2)=0, got {h0.real:.3g}, {abs(hh):.3g}")
        for i, g in enumerate(hp, 1):
            if abs(eval_ft(g, 0.0)) > LOWPASS_TOL:
                raise InvalidFilterBank(f"high-pass filter {i} needs g^(0)=0")

    @property
    def L(self) -> int:
        return len(self.highpass)

    def filters(self) -> tuple[FiniteSequence, ...]:
        return (self.lowpass,) + self.highpass

    def to_dict(self) -> dict:
        return {"name": self.name, "lowpass": self.lowpass.to_dict(),
                "highpass": [g.to_dict() for g in self.highpass]}

    @classmethod
    def from_dict(cls, d: dict) -> "FilterBank":
        return cls(FiniteSequence.from_dict(d["lowpass"]),
                   tuple(FiniteSequence.from_dict(g) for g in d["highpass"]),
                   str(d.get("name", "")))


# -- iterated filters --------------------------------------------------------

def iterated_lowpass(h: FiniteSequence, j: int) -> FiniteSequence:
    """``h * U h * ... * U^{j-1} h``; the empty product (``j = 0``) is ``delta``."""
    if j < 0:
        raise BadParams("order must be nonnegative")
    out = FiniteSequence.delta()
    for k in range(j):
        out = convolve(out, upsample(h, k))
    return out


def iterated_highpass(h: FiniteSequence, g: FiniteSequence, j: int) -> FiniteSequence:
    """``h_{j-1} * U^{j-1} g``."""
    if j < 1:
        raise BadParams("order must be positive")
    return convolve(iterated_lowpass(h, j - 1), upsample(g, j - 1))


def iterated_bank(bank: FilterBank, J: int) -> tuple[FiniteSequence, list[list[FiniteSequence]]]:
    """``h_J`` and ``[[g^1_j, ..., g^L_j] for j = 1..J]``, built incrementally."""
    _check_depth(J)
    low = FiniteSequence.delta()
    levels = []
    for j in range(1, J + 1):
        levels.append([convolve(low, upsample(g, j - 1)) for g in bank.highpass])
        low = convolve(low, upsample(bank.lowpass, j - 1))
    return low, levels


def _check_depth(J: int):
    if J < 1:
        raise BadParams("order must be at least 1")
    if J > MAX_DEPTH:
        raise DepthLimit(f"order {J} exceeds the limit of {MAX_DEPTH}")


# -- analysis and synthesis --------------------------------------------------

@dataclass(frozen=True)
class CoefficientPyramid:
    """Detail branches ``(j, l)`` for ``1 <= j <= J``, ``1 <= l <= L``, plus the approximation."""

    J: int
    details: dict
    approximation: FiniteSequence

    def __post_init__(self):
        keys = set(self.details)
        L = len(keys) // self.J if self.J else 0
        expected = {(j, l) for j in range(1, self.J + 1) for l in range(1, L + 1)}
        if self.J < 1 or keys != expected:
            raise PyramidShape("detail keys must cover (1..J) x (1..L)")

    @property
    def L(self) -> int:
        return len(self.details) // self.J

    def branches(self) -> Iterator[FiniteSequence]:
        for key in sorted(self.details):
            yield self.details[key]
        yield self.approximation

    def energy(self) -> float:
        return float(sum(b.energy() for b in self.branches()))

    def norm(self) -> float:
        return float(np.sqrt(self.energy()))

    def inner(self, other: "CoefficientPyramid") -> float:
        self._match(other)
        total = seq_inner(self.approximation, other.approximation)
        for key in sorted(self.details):
            total += seq_inner(self.details[key], other.details[key])
        return float(total)

    def _match(self, other: "CoefficientPyramid"):
        if self.J != other.J or set(self.details) != set(other.details):
            raise PyramidShape("pyramids have different shapes")

    def map(self, fn) -> "CoefficientPyramid":
        return CoefficientPyramid(self.J, {k: fn(v) for k, v in self.details.items()},
                                  fn(self.approximation))

    def __sub__(self, other: "CoefficientPyramid") -> "CoefficientPyramid":
        self._match(other)
        return CoefficientPyramid(self.J, {k: v - other.details[k] for k, v in self.details.items()},
                                  self.approximation - other.approximation)

    def translate(self, k: int) -> "CoefficientPyramid":
        return self.map(lambda s: translate(s, k))

    @classmethod
    def zeros(cls, J: int, L: int) -> "CoefficientPyramid":
        z = FiniteSequence.zero()
        return cls(J, {(j, l): z for j in range(1, J + 1) for l in range(1, L + 1)}, z)


def analyze(bank: FilterBank, x: FiniteSequence, J: int) -> CoefficientPyramid:
    """Order-``J`` analysis with the a trous cascade.

    The running approximation is filtered by the upsampled, involuted filters
    so no long iterated filter is ever formed.
    """
    _check_depth(J)
    hbar = involute(bank.lowpass)
    gbar = [involute(g) for g in bank.highpass]
    details = {}
    approx = x
    for j in range(1, J + 1):
        for l, g in enumerate(gbar, 1):
            details[(j, l)] = convolve(approx, upsample(g, j - 1))
        approx = convolve(approx, upsample(hbar, j - 1))
    return CoefficientPyramid(J, details, approx)


def synthesize(bank: FilterBank, pyr: CoefficientPyramid) -> FiniteSequence:
    """Adjoint of :func:`analyze`: ``c_{J+1} * h_J + sum c_{j,l} * g^l_j``."""
    if pyr.L != bank.L:
        raise PyramidShape(f"pyramid has {pyr.L} high-pass branches, bank has {bank.L}")
    y = pyr.approximation
    for j in range(pyr.J, 0, -1):
        y = convolve(y, upsample(bank.lowpass, j - 1))
        for l, g in enumerate(bank.highpass, 1):
            y = y + convolve(pyr.details[(j, l)], upsample(g, j - 1))
    return y


def lowpass_decay(bank: FilterBank, x: FiniteSequence, Jmax: int) -> list[float]:
    """``||x * involute(h_J)||`` for ``J = 1 .. Jmax``."""
    _check_depth(Jmax)
    hbar = involute(bank.lowpass)
    out = []
    approx = x
    for j in range(1, Jmax + 1):
        approx = convolve(approx, upsample(hbar, j - 1))
        out.append(approx.norm())
    return out


# -- frame functions on the grid --------------------------------------------

def _abs2(v: np.ndarray) -> np.ndarray:
    return v.real ** 2 + v.imag ** 2


def level_samples(bank: FilterBank, J: int, grid: GridSpec) -> tuple[np.ndarray, list[np.ndarray]]:
    """Grid samples of ``|h_J^|**2`` and of ``sum_l |g^l_j^|**2`` for ``j = 1..J``."""
    hs = _abs2(eval_ft_grid(bank.lowpass, grid))
    gs = sum(_abs2(eval_ft_grid(g, grid)) for g in bank.highpass)
    low = np.ones(grid.N)
    levels = []
    for j in range(J):
        idx = dyadic_indices(grid, j)
        levels.append(low * gs[idx])
        low = low * hs[idx]
    return low, levels


def frame_degree(bank: FilterBank, J: int, include_lowpass: bool = True) -> int:
    """Degree of ``Phi_J`` as a trigonometric polynomial."""
    dh = len(bank.lowpass) - 1
    dg = max(len(g) - 1 for g in bank.highpass)
    deg = max((2 ** (j - 1) - 1) * dh + 2 ** (j - 1) * dg for j in range(1, J + 1))
    if include_lowpass:
        deg = max(deg, (2 ** J - 1) * dh)
    return deg


def _crude_lipschitz(bank: FilterBank, J: int, degree: int) -> float:
    """Bernstein-type derivative bound from l1 norms, for grids too coarse to resolve Phi."""
    nh = bank.lowpass.l1()
    total = sum(nh ** (2 * (j - 1)) * g.l1() ** 2 for j in range(1, J + 1) for g in bank.highpass)
    total += nh ** (2 * J)
    return 2 * np.pi * degree * total


def frame_function_at(bank: FilterBank, xi, J: int, include_lowpass: bool = True):
    """Direct evaluation of ``Phi_J`` (or of the partial high-pass sum) at ``xi``."""
    xi = np.asarray(xi, dtype=float)
    low = np.ones(xi.shape)
    total = np.zeros(xi.shape)
    for j in range(J):
        arg = (2.0 ** j) * xi
        total = total + low * sum(np.abs(eval_ft(g, arg)) ** 2 for g in bank.highpass)
        low = low * np.abs(eval_ft(bank.lowpass, arg)) ** 2
    if include_lowpass:
        total = total + low
    return float(total) if total.ndim == 0 else total


class Verdict(str, Enum):
    CERTIFIED_STABLE = "CertifiedStable"
    BESSEL_ONLY = "BesselOnly"
    UNVERIFIED = "Unverified"
    DIVERGENCE_DETECTED = "DivergenceDetected"


@dataclass(frozen=True)
class FrameReport:
    """Certified frame bounds of a finitely or (truncated) infinitely iterated bank.

    ``A`` encloses the infimum of the frame function and ``B`` its supremum.
    For a truncated infinite bank ``band_A`` holds the infimum restricted to
    ``band_edge <= |xi| <= 1/2``, where the omitted levels are negligible.
    """

    J: int
    infinite: bool
    A: CertifiedInterval
    B: CertifiedInterval
    per_level_sup: list = field(default_factory=list)
    parseval_deviation: float = 0.0
    tail_flag: bool = False
    band_A: CertifiedInterval | None = None
    band_edge: float | None = None

    def __post_init__(self):
        if self.A.lo > self.B.hi:
            raise ValueError("inconsistent frame report")

    @property
    def lower(self) -> float:
        return self.A.lo

    @property
    def upper(self) -> float:
        return self.B.hi

    def to_dict(self) -> dict:
        d = {"order": self.J, "infinite": self.infinite, "A": self.A.to_dict(),
             "B": self.B.to_dict(), "per_level_sup": list(map(float, self.per_level_sup)),
             "parseval_deviation": self.parseval_deviation, "tail_flag": self.tail_flag}
        if self.band_A is not None:
            d["band_A"] = self.band_A.to_dict()
            d["band_edge"] = self.band_edge
        return d


def _divergence_flag(sups: Sequence[float]) -> bool:
    if len(sups) < 2:
        return False
    tail = np.asarray(sups[-DIVERGENCE_WINDOW:], dtype=float)
    slope = np.polyfit(np.arange(tail.size), np.log(np.maximum(tail, 1e-300)), 1)[0]
    return bool(slope >= 0 and sups[-1] > 10 * sups[0])


def _report(bank: FilterBank, J: int, grid: GridSpec | None, infinite: bool,
            band_guard: int) -> FrameReport:
    degree = frame_degree(bank, J, include_lowpass=not infinite)
    explicit = grid is not None
    if grid is None:
        grid = GridSpec.for_degree(degree, cap=MAX_GRID, oversample=DEFAULT_OVERSAMPLE)
    if explicit and grid.N <= 2 * degree:
        raise GridTooSmall(f"grid size {grid.N} must exceed twice the degree {degree}")
    low, levels = level_samples(bank, J, grid)
    phi = np.zeros(grid.N)
    for lev in levels:
        phi += lev
    if not infinite:
        phi += low
    if grid.N > 2 * degree:
        m, c = trig_coefficients(phi, degree)
        lip, curv = derivative_bounds(m, c)
        pad = pad_for(lip, curv, grid.delta)
    else:
        lip, curv = _crude_lipschitz(bank, J, degree), np.inf
        pad = lip * grid.delta / 2
    lo, hi = float(phi.min()), float(phi.max())
    hi_c = hi + pad
    full_degree = frame_degree(bank, J)
    if infinite and grid.N > 2 * full_degree:
        # the partial sum never exceeds Phi_J, which is usually far smoother
        full = phi + low
        hi_c = min(hi_c, float(full.max()) + pad_for(
            *derivative_bounds(*trig_coefficients(full, full_degree)), grid.delta))
    lo_c = max(lo - pad, 0.0)  # sums of squared moduli are nonnegative
    A = CertifiedInterval(lo_c, lo, lo - lo_c, grid)
    B = CertifiedInterval(hi, max(hi_c, hi), max(hi_c, hi) - hi, grid)
    sups = [float(lev.max()) for lev in levels]
    band_A = band_edge = None
    if infinite:
        band_edge = 2.0 ** -max(J - band_guard, 1)
        _, lb = cell_lower_bounds(phi, lip, curv, grid, band_edge, 0.5)
        k0 = int(np.ceil(band_edge * grid.N))
        grid_min = float(phi[k0:grid.N // 2 + 1].min())
        band_lo = min(float(lb.min()), grid_min)
        band_A = CertifiedInterval(band_lo, grid_min, grid_min - band_lo, grid)
    return FrameReport(J=J, infinite=infinite, A=A, B=B, per_level_sup=sups,
                       parseval_deviation=max(B.hi - 1.0, 1.0 - A.lo, 0.0),
                       tail_flag=_divergence_flag(sups) if infinite else False,
                       band_A=band_A, band_edge=band_edge)


def frame_bounds(bank: FilterBank, J: int, grid: GridSpec | None = None) -> FrameReport:
    """Certified frame bounds of the order-``J`` bank.

    Parameters
    ----------
    bank : FilterBank
    J : int
        Iteration order.
    grid : GridSpec, optional
        Must exceed twice the degree of ``Phi_J``; by default the smallest
        adequate power of two (at least 4096) is used.

    Returns
    -------
    FrameReport
        ``A = [min - pad, min]`` and ``B = [max, max + pad]`` over the grid.
    """
    _check_depth(J)
    return _report(bank, J, grid, infinite=False, band_guard=0)


def infinite_frame_bounds(bank: FilterBank, Jmax: int, grid: GridSpec | None = None,
                          band_guard: int = 4) -> FrameReport:
    """Partial sums ``sum_{j <= Jmax} sum_l |g^l_j^|**2`` of the infinite frame function.

    The partial-sum infimum is a valid lower bound for the infinite bank
    because every omitted term is nonnegative.  Over the whole torus it is
    zero (every ``g^l_j^`` vanishes at the origin), so the report also gives
    the infimum over ``2**-(Jmax - band_guard) <= |xi| <= 1/2``.  The upper
    bound carries no tail correction; it is the smaller of the padded
    partial-sum maximum and the certified maximum of ``Phi_Jmax``, which
    dominates the partial sum.  When the default grid would exceed
    ``2**21`` points the pad falls back to an l1-norm derivative bound.
    """
    _check_depth(Jmax)
    return _report(bank, Jmax, grid, infinite=True, band_guard=band_guard)


def check_perfect_reconstruction(bank: FilterBank, grid: GridSpec | None = None) -> float:
    """Certified ``sup |Phi_1 - 1|``."""
    return frame_bounds(bank, 1, grid).parseval_deviation


def bound_propagation(A: float, B: float) -> tuple[float, float]:
    """Bounds ``(min(A, A/B), max(B/A, B))`` valid for every finite order."""
    if not (np.isfinite(A) and np.isfinite(B)) or not 0 < A <= B:
        raise BadBounds(f"need 0 < A <= B, got A={A}, B={B}")
    return min(A, A / B), max(B / A, B)


# -- stability certificates --------------------------------------------------

HAAR_FACTOR = FiniteSequence(-1, [0.5, 0.5])


def factor_haar_type(h: FiniteSequence, tol: float = 1e-8) -> tuple[int, FiniteSequence]:
    """Split ``h^ = ((1 + e^{2 pi i xi}) / 2)**n p^`` with ``p^(0) = 1``.

    In the variable ``u = e^{-2 pi i xi}`` the Haar factor is
    ``u^{-1} (1 + u) / 2``, so each step divides the tap polynomial by
    ``1 + u`` while the value at ``u = -1`` is within ``tol`` of 0, relative
    to the l1 norm of the current quotient times its length (rounding in the
    taps is amplified by each division).

    Raises
    ------
    NotLowPass
        If ``h^(1/2)`` is not zero within the tolerance.
    """
    p_offset, taps = h.offset, np.array(h.taps)
    n = 0
    while taps.size > 1:
        # synthetic division by (u + 1), highest power first
        rev = taps[::-1]
        q = np.zeros(rev.size - 1)
        acc = rev[0]
        for i in range(1, rev.size):
            q[i - 1] = acc
            acc = rev[i] - acc
        if abs(acc) > tol * np.sum(np.abs(taps)) * taps.size:
            break
        taps = 2 * q[::-1]
        p_offset += 1
        n += 1
    if n == 0:
        raise NotLowPass("low-pass filter has no zero at xi = 1/2")
    p = FiniteSequence(p_offset, taps / np.sum(taps))
    return n, p


def _power_product_samples(p: FiniteSequence, s: int, grid: GridSpec) -> np.ndarray:
    ps = _abs2(eval_ft_grid(p, grid))
    out = np.ones(grid.N)
    for k in range(s):
        out = out * ps[dyadic_indices(grid, k)]
    return out


def check_bessel_condition(p: FiniteSequence, n: int, s_max: int = 8,
                           grid: GridSpec | None = None) -> tuple[int, float] | None:
    """Smallest ``s`` with ``sup |prod_{k<s} p^(2^k xi)| < 2^{n s}``.

    Returns ``(s, epsilon)`` with ``epsilon = n - log2(sup) / s`` computed
    from the certified supremum, or ``None`` if no ``s <= s_max`` works.
    """
    if abs(eval_ft(p, 0.0) - 1) > LOWPASS_TOL:
        raise BadParams("p^(0) must equal 1")
    dp = len(p) - 1
    for s in range(1, s_max + 1):
        degree = (2 ** s - 1) * dp
        g = grid if grid is not None else GridSpec.for_degree(degree, minimum=1 << 16)
        if g.N <= 2 * degree:
            g = GridSpec.for_degree(degree, minimum=g.N)
        sup = np.sqrt(certify_samples(_power_product_samples(p, s, g), degree, g).hi)
        if sup < 2.0 ** (n * s):
            return s, float(n - np.log2(sup) / s)
    return None


class LowerCondition(NamedTuple):
    p0: float
    a: float
    delta: float
    q0: float


def _certified_parts(x: FiniteSequence, grid: GridSpec):
    vals = _abs2(eval_ft_grid(x, grid))
    m, c = trig_coefficients(vals, len(x) - 1)
    lip, curv = derivative_bounds(m, c)
    return vals, lip, curv


def check_lower_condition(p: FiniteSequence, bank: FilterBank,
                          grid: GridSpec | None = None) -> LowerCondition | None:
    """Constants ``p0, a, delta, q0`` of the sufficient lower frame bound condition.

    * ``p0``: certified infimum of ``|p^|`` on ``|xi| <= 1/4``;
    * ``a``: certified supremum of ``(1 - |p^|) / |xi|`` on ``0 < |xi| <= 1/4``,
      at least ``1e-6``;
    * ``delta = min(1/4, 1/(2a))``;
    * ``q0``: certified infimum of ``max_l |g^l^|`` on ``1/4 <= |xi| <= 1/2``.

    All moduli are even in ``xi`` for real filters, so only ``xi >= 0`` is
    scanned.  Returns ``None`` if any constant fails to be positive.
    """
    degree = max(len(f) - 1 for f in (p,) + bank.highpass)
    grid = grid if grid is not None else GridSpec.for_degree(degree, minimum=1 << 16)
    d = grid.delta
    psi, lip, curv = _certified_parts(p, grid)

    k, lb = cell_lower_bounds(psi, lip, curv, grid, 0.0, 0.25)
    p0 = float(np.sqrt(max(lb.min(), 0.0)))
    if p0 <= 0:
        return None

    # near the origin 1 - |p^| <= 1 - |p^|**2 <= curv xi**2 / 2
    num = 1.0 - np.sqrt(np.maximum(lb, 0.0))
    left, right = k * d, (k + 1) * d
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(num > 0, num / left, num / right)
    ratio[k == 0] = curv * d / 2
    a = max(float(ratio.max()), 1e-6)
    delta = min(0.25, 1.0 / (2 * a))
    kk = np.arange(int(np.floor(delta * grid.N)) + 1)
    if np.any(np.sqrt(psi[kk]) < 1.0 - a * kk * d - 1e-12):
        return None

    best = None
    for g in bank.highpass:
        vals, glip, gcurv = _certified_parts(g, grid)
        _, glb = cell_lower_bounds(vals, glip, gcurv, grid, 0.25, 0.5)
        best = glb if best is None else np.maximum(best, glb)
    q0 = float(np.sqrt(max(best.min(), 0.0)))
    if q0 <= 0:
        return None
    return LowerCondition(p0, a, delta, q0)


@dataclass(frozen=True)
class StabilityCertificate:
    """Constants of the sufficient stability conditions and the resulting verdict.

    ``Unverified`` means the sufficient conditions could not be confirmed; it
    does not mean the bank is unstable.
    """

    n: int
    p_taps: FiniteSequence
    verdict: Verdict
    s: int | None = None
    epsilon: float | None = None
    p0: float | None = None
    a: float | None = None
    delta: float | None = None
    q0: float | None = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "n": self.n, "p": self.p_taps.to_dict(),
                "s": self.s, "epsilon": self.epsilon, "p0": self.p0, "a": self.a,
                "delta": self.delta, "q0": self.q0}


def certify_stability(bank: FilterBank, s_max: int = 8, jmax: int = 20,
                      grid: GridSpec | None = None) -> StabilityCertificate:
    """Run the Bessel and lower-bound checks on an infinitely iterated bank.

    The verdict is ``CertifiedStable`` when both sufficient conditions hold
    and ``BesselOnly`` when only the first does.  Otherwise the partial sums
    up to ``jmax`` are scanned and ``DivergenceDetected`` is returned when
    the per-level suprema keep growing; failing that, ``Unverified``.
    """
    n, p = factor_haar_type(bank.lowpass)
    bessel = check_bessel_condition(p, n, s_max)
    lower = check_lower_condition(p, bank) if bessel else None
    fields = {}
    if bessel:
        fields.update(s=bessel[0], epsilon=bessel[1])
    if lower:
        fields.update(lower._asdict())
    if bessel and lower:
        verdict = Verdict.CERTIFIED_STABLE
    elif bessel:
        verdict = Verdict.BESSEL_ONLY
    elif infinite_frame_bounds(bank, jmax, grid).tail_flag:
        verdict = Verdict.DIVERGENCE_DETECTED
    else:
        verdict = Verdict.UNVERIFIED
    return StabilityCertificate(n=n, p_taps=p, verdict=verdict, **fields)


# -- reconstruction ----------------------------------------------------------

def frame_reconstruct(bank: FilterBank, pyr: CoefficientPyramid, A: float, B: float,
                      tol: float = 1e-9, max_iter: int = 500,
                      residuals: list | None = None) -> FiniteSequence:
    """Invert the analysis operator with the frame algorithm.

    Iterates ``x <- x + (2 / (A + B)) synthesize(pyr - analyze(x))`` from
    zero until ``||pyr - analyze(x)|| <= tol ||pyr||``.  The residual norms
    are appended to ``residuals`` when a list is given; they contract by at
    most ``(B - A) / (B + A)`` per step.

    Raises
    ------
    NoConvergence
        After ``max_iter`` updates.
    """
    if not (np.isfinite(A) and np.isfinite(B)) or not 0 < A <= B:
        raise BadBounds(f"need 0 < A <= B, got A={A}, B={B}")
    if pyr.L != bank.L:
        raise PyramidShape(f"pyramid has {pyr.L} high-pass branches, bank has {bank.L}")
    lam = 2.0 / (A + B)
    target = pyr.norm()
    x = FiniteSequence.zero()
    if target == 0:
        return x
    for _ in range(max_iter + 1):
        r = pyr - analyze(bank, x, pyr.J)
        rn = r.norm()
        if residuals is not None:
            residuals.append(rn)
        if rn <= tol * target:
            return x
        x = x + lam * synthesize(bank, r)
    raise NoConvergence(f"residual {rn:.3g} after {max_iter} iterations")
