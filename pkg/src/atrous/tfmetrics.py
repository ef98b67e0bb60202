"""Time and frequency spreads of filters.

For ``x`` with autocorrelation ``r`` the squared modulus of the Fourier
transform is ``|x^(xi)|**2 = r_0 + 2 sum_{m >= 1} r_m cos(2 pi m xi)``, so all
frequency moments reduce to the closed forms

    int_{-1/2}^{1/2} xi**2 cos(2 pi m xi) dxi = (-1)**m / (2 pi**2 m**2)
    int_0^{1/2}      xi    cos(2 pi m xi) dxi = ((-1)**m - 1) / (4 pi**2 m**2)
    int_0^{1/2}      xi**2 cos(2 pi m xi) dxi = (-1)**m / (4 pi**2 m**2)

and no numerical quadrature is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParams, ZeroSequence
from .filterbank import FilterBank
from .sequences import FiniteSequence, autocorrelation
from .spectrum import eval_ft

MODES = ("lowpass", "bandpass", "highpass")


@dataclass(frozen=True)
class TFStats:
    """Centroids and spreads; ``omega0`` and ``sigma_w2`` are in radians."""

    n0: float
    sigma_n2: float
    omega0: float
    sigma_w2: float
    mode: str = "lowpass"

    @property
    def product(self) -> float:
        return self.sigma_n2 * self.sigma_w2

    def to_dict(self) -> dict:
        return {"n0": self.n0, "sigma_n2": self.sigma_n2, "omega0": self.omega0,
                "sigma_w2": self.sigma_w2, "product": self.product, "mode": self.mode}


def _check(x: FiniteSequence) -> FiniteSequence:
    """Reject the zero sequence and rescale so the largest tap is 1.

    Every statistic is scale invariant and tiny taps would underflow.
    """
    if x.is_zero():
        raise ZeroSequence("spreads of the zero sequence are undefined")
    return FiniteSequence(x.offset, x.taps / np.max(np.abs(x.taps)))


def time_spread(x: FiniteSequence) -> tuple[float, float]:
    """Centroid ``n0`` and spread ``sum (n - n0)**2 |x(n)|**2 / ||x||**2``."""
    x = _check(x)
    w = x.taps * x.taps
    e = np.sum(w)
    n = x.indices.astype(float)
    n0 = float(np.sum(n * w) / e)
    return n0, float(np.sum((n - n0) ** 2 * w) / e)


def _lags(x: FiniteSequence) -> tuple[np.ndarray, np.ndarray, float]:
    r = autocorrelation(x)
    m = np.arange(1, len(x))
    return m.astype(float), r.values_on(1, len(x)), float(np.sum(x.taps * x.taps))


def _centered_second_moment(m, rm, r0) -> float:
    """``int_{-1/2}^{1/2} xi**2 |x^|**2``."""
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    return r0 / 12 + float(np.sum(2 * rm * sign / (2 * np.pi ** 2 * m ** 2)))


def freq_spread(x: FiniteSequence, mode: str = "lowpass") -> tuple[float, float]:
    """Frequency centroid ``omega0`` and spread ``sigma_w2``.

    Parameters
    ----------
    x : FiniteSequence
    mode : {"lowpass", "bandpass", "highpass"}
        ``lowpass``: ``(2 pi)**2 int xi**2 |x^|**2 / ||x||**2`` over
        ``[-1/2, 1/2]``.  ``bandpass``: spread about the centroid ``xi+`` of
        the positive half band, ``(2 pi)**2 2 int_0^{1/2} (xi - xi+)**2 |x^|**2``
        normalized the same way.  ``highpass``: the low-pass formula about
        ``xi = 1/2`` instead of 0.
    """
    x = _check(x)
    if mode not in MODES:
        raise BadParams(f"mode must be one of {MODES}")
    m, rm, r0 = _lags(x)
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    if mode == "lowpass":
        return 0.0, (2 * np.pi) ** 2 * _centered_second_moment(m, rm, r0) / r0
    if mode == "highpass":
        return float(np.pi), (2 * np.pi) ** 2 * _centered_second_moment(m, rm * sign, r0) / r0
    i0 = r0 / 2
    i1 = r0 / 8 + float(np.sum(2 * rm * (sign - 1) / (4 * np.pi ** 2 * m ** 2)))
    i2 = r0 / 24 + float(np.sum(2 * rm * sign / (4 * np.pi ** 2 * m ** 2)))
    c = 2 * i1 / r0
    spread = 2 * (i2 - 2 * c * i1 + c * c * i0) / r0
    return float(2 * np.pi * c), (2 * np.pi) ** 2 * spread


def tf_stats(x: FiniteSequence, mode: str = "lowpass") -> TFStats:
    n0, sn = time_spread(x)
    w0, sw = freq_spread(x, mode)
    return TFStats(n0, sn, w0, sw, mode)


def classify_highpass(g: FiniteSequence, tol: float = 1e-6) -> str:
    """``bandpass`` if the response also vanishes at ``xi = 1/2``, else ``highpass``."""
    peak = float(np.max(np.abs(eval_ft(g, np.linspace(0, 0.5, 257)))))
    return "bandpass" if abs(eval_ft(g, 0.5)) <= tol * peak else "highpass"


def bank_tf_stats(bank: FilterBank, bandpass_high: bool = False) -> dict[str, TFStats]:
    """Statistics for every filter of a bank.

    The low-pass filter uses the low-pass formula.  A high-pass filter uses
    the band-pass convention when its response vanishes at ``xi = 1/2`` (or
    when ``bandpass_high`` is set) and is otherwise measured about ``1/2``.
    """
    out = {"h": tf_stats(bank.lowpass, "lowpass")}
    for l, g in enumerate(bank.highpass, 1):
        mode = "bandpass" if bandpass_high else classify_highpass(g)
        out[f"g{l}" if bank.L > 1 else "g"] = tf_stats(g, mode)
    return out
