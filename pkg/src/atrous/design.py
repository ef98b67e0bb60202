"""Filter design: symmetric families, frequency interpolation, Bezout plus Riesz.

Polynomials in ``z = sin(pi xi)**2`` are converted to cosine series through
``cos(2 pi k xi) = T_k(1 - 2 z)`` (Chebyshev polynomials), and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize, minimize_scalar

from .errors import (BadParams, EmptyFeasibleSet, NegativeFactor, NotCoprime,
                     NotNonnegative, OddCircleRoot, SingularSystem)
from .filterbank import FilterBank
from .sequences import FiniteSequence, convolve_all, modulate_half
from .spectrum import GridSpec, certify_samples, eval_ft_grid

HAAR_LOW = FiniteSequence(-1, [0.5, 0.5])


@dataclass(frozen=True)
class CosinePolynomial:
    """``c_0 + sum_k c_k cos(2 pi k xi)``."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        nz = np.flatnonzero(c)
        c = c[:nz[-1] + 1] if nz.size else c[:1]
        object.__setattr__(self, "coeffs", tuple(float(v) for v in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        k = np.arange(len(self.coeffs))
        return np.cos(2 * np.pi * np.multiply.outer(xi, k)) @ np.asarray(self.coeffs)

    def to_sequence(self) -> FiniteSequence:
        """Symmetric taps: ``c_0`` at 0 and ``c_k / 2`` at ``+-k``."""
        c = np.asarray(self.coeffs)
        taps = np.concatenate([c[:0:-1] / 2, c[:1], c[1:] / 2])
        return FiniteSequence(-self.degree, taps)

    @classmethod
    def from_sequence(cls, x: FiniteSequence) -> "CosinePolynomial":
        """Inverse of :meth:`to_sequence` for a symmetric sequence."""
        k = max(-x.offset, x.stop - 1)
        c = [x[0]] + [x[j] + x[-j] for j in range(1, k + 1)]
        return cls(tuple(c))

    def to_z(self) -> "ZPolynomial":
        # T_k(c) in powers of c, then c = 1 - 2 z
        pc = C.cheb2poly(np.asarray(self.coeffs))
        out = np.zeros(1)
        for k, a in enumerate(pc):
            out = P.polyadd(out, a * P.polypow([1.0, -2.0], k))
        return ZPolynomial(tuple(out))


@dataclass(frozen=True)
class ZPolynomial:
    """Polynomial in ``z = sin(pi xi)**2``, coefficients in ascending powers."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        nz = np.flatnonzero(c)
        c = c[:nz[-1] + 1] if nz.size else c[:1]
        object.__setattr__(self, "coeffs", tuple(float(v) for v in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return P.polyval(z, np.asarray(self.coeffs))

    def __mul__(self, other: "ZPolynomial") -> "ZPolynomial":
        return ZPolynomial(tuple(P.polymul(self.coeffs, other.coeffs)))

    def __add__(self, other: "ZPolynomial") -> "ZPolynomial":
        return ZPolynomial(tuple(P.polyadd(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ZPolynomial") -> "ZPolynomial":
        return ZPolynomial(tuple(P.polysub(self.coeffs, other.coeffs)))

    def __pow__(self, k: int) -> "ZPolynomial":
        return ZPolynomial(tuple(P.polypow(self.coeffs, k)))

    def to_cosine(self) -> CosinePolynomial:
        # z = (1 - c) / 2 with c = cos(2 pi xi)
        pc = np.zeros(1)
        for k, a in enumerate(self.coeffs):
            pc = P.polyadd(pc, a * P.polypow([0.5, -0.5], k))
        return CosinePolynomial(tuple(C.poly2cheb(pc)))

    @classmethod
    def of(cls, *coeffs: float) -> "ZPolynomial":
        return cls(tuple(coeffs))


Z = ZPolynomial.of(0.0, 1.0)
ONE = ZPolynomial.of(1.0)


# -- symmetric families ------------------------------------------------------

def _symmetric_p(params: Sequence[float]) -> FiniteSequence:
    if len(params) == 1:
        (a,) = params
        return FiniteSequence(-1, [-a / 2, 1 + a, -a / 2])
    a, b = params
    return FiniteSequence(-2, [-b / 2, -a / 2, 1 + a + b, -a / 2, -b / 2])


def symmetric_family(n: int, params: Sequence[float], name: str = "") -> FilterBank:
    """Bank with ``h^ = ((1 + e^{2 pi i xi}) / 2)**n p^`` and ``g = modulate_half(h)``.

    ``p^ = 1 + a - a cos(2 pi xi)`` for one parameter and
    ``p^ = 1 + a + b - a cos(2 pi xi) - b cos(4 pi xi)`` for two; ``h`` is
    centred so that its taps are palindromic about index 0.
    """
    params = [float(v) for v in params]
    if n < 1 or len(params) not in (1, 2) or not all(v > 0 and np.isfinite(v) for v in params):
        raise BadParams("need n >= 1 and one or two positive parameters")
    h = convolve_all([HAAR_LOW] * n + [_symmetric_p(params)])
    h = FiniteSequence.centered(h.taps)
    return FilterBank(h, (modulate_half(h),), name or f"symmetric-n{n}")


def _p_sup(params: Sequence[float], grid: GridSpec) -> float:
    v = eval_ft_grid(_symmetric_p(params), grid)
    return float(np.abs(v).max())


def flatness_ratio(n: int, params: Sequence[float], grid: GridSpec | None = None) -> float:
    """Certified ``sup / inf`` of ``|h^|**2 + |g^|**2`` for the symmetric family."""
    grid = grid or GridSpec(4096)
    bank = symmetric_family(n, params)
    total = sum(np.abs(eval_ft_grid(f, grid)) ** 2 for f in bank.filters())
    iv = certify_samples(total, len(bank.lowpass) - 1, grid)
    return iv.hi / iv.lo if iv.lo > 0 else np.inf


@dataclass(frozen=True)
class OptimizeResult:
    params: tuple[float, ...]
    bank: FilterBank
    ratio: float


def optimize_symmetric(n: int = 2, degree: int = 1, bounds: Sequence[tuple[float, float]] | None = None,
                       tol: float = 1e-8, grid: GridSpec | None = None) -> OptimizeResult:
    """Choose the symmetric-family parameters that make the frame function flattest.

    Minimizes :func:`flatness_ratio` over a box.  One parameter is handled by
    bounded scalar minimization; two by cyclic coordinate descent followed
    by a Nelder-Mead polish, since the ratio of extrema has kinks where
    coordinate steps alone can stall.  Points whose certified ``sup |p^|``
    reaches ``2**n`` are infeasible.

    Raises
    ------
    EmptyFeasibleSet
        If no feasible point is found in the box.
    """
    if degree not in (1, 2):
        raise BadParams("degree must be 1 or 2")
    grid = grid or GridSpec(4096)
    if bounds is None:
        bounds = [(1e-9, (2.0 ** n - 1) / 2)] if degree == 1 else [(1e-9, 1.0), (1e-9, 0.5)]
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if len(bounds) != degree or any(not 0 < lo <= hi for lo, hi in bounds):
        raise BadParams("need one positive (lo, hi) pair per parameter")

    def objective(v) -> float:
        v = [min(max(x, lo), hi) for x, (lo, hi) in zip(v, bounds)]
        if _p_sup(v, grid) >= 2.0 ** n:
            return np.inf
        return flatness_ratio(n, v, grid)

    def line(v, i):
        lo, hi = bounds[i]
        if hi - lo <= tol:
            return lo
        res = minimize_scalar(lambda t: objective([t if k == i else v[k] for k in range(degree)]),
                              bounds=(lo, hi), method="bounded", options={"xatol": tol})
        return float(res.x)

    x = [0.5 * (lo + hi) for lo, hi in bounds]
    if degree == 1:
        x = [line(x, 0)]
    else:
        for _ in range(50):
            prev = list(x)
            for i in range(degree):
                x[i] = line(x, i)
            if max(abs(p - q) for p, q in zip(prev, x)) <= tol:
                break
        res = minimize(objective, x, method="Nelder-Mead",
                       options={"xatol": tol, "fatol": 1e-14, "maxiter": 4000})
        if res.fun <= objective(x):
            x = [min(max(v, lo), hi) for v, (lo, hi) in zip(res.x, bounds)]
    ratio = objective(x)
    if not np.isfinite(ratio):
        raise EmptyFeasibleSet("no admissible parameters in the search box")
    return OptimizeResult(tuple(x), symmetric_family(n, x), ratio)


# -- interpolation designs ---------------------------------------------------

def interp_design(K: int, constraints: Sequence[tuple[float, float]]) -> CosinePolynomial:
    """Cosine polynomial of degree ``K`` through ``K + 1`` points ``(xi, value)``.

    Raises
    ------
    SingularSystem
        If the cosine Vandermonde matrix has condition number above ``1e12``.
    """
    pts = [(float(x), float(v)) for x, v in constraints]
    if len(pts) != K + 1:
        raise BadParams(f"need exactly {K + 1} constraints, got {len(pts)}")
    xi = np.array([p[0] for p in pts])
    if np.any(xi < 0) or np.any(xi > 0.5):
        raise BadParams("constraint frequencies must lie in [0, 1/2]")
    V = np.cos(2 * np.pi * np.outer(xi, np.arange(K + 1)))
    if np.linalg.cond(V) > 1e12:
        raise SingularSystem("interpolation system is singular")
    b = np.linalg.solve(V, np.array([p[1] for p in pts]))
    return CosinePolynomial(tuple(b))


# -- Bezout identities and spectral factorization ----------------------------

def bezout_solve(f1: ZPolynomial, f2: ZPolynomial, d1: int, d2: int
                 ) -> tuple[ZPolynomial, ZPolynomial]:
    """Unique ``p, q`` with ``deg p <= d1``, ``deg q <= d2`` and ``f1 p + f2 q = 1``.

    Raises
    ------
    NotCoprime
        If the coefficient system is singular or the identity fails.
    """
    D = f1.degree + d1
    if D != f2.degree + d2 or d1 < 0 or d2 < 0:
        raise BadParams("need deg f1 + d1 == deg f2 + d2")
    M = np.zeros((D + 1, d1 + d2 + 2))
    for i in range(d1 + 1):
        M[i:i + len(f1.coeffs), i] = f1.coeffs
    for i in range(d2 + 1):
        M[i:i + len(f2.coeffs), d1 + 1 + i] = f2.coeffs
    if np.linalg.cond(M) > 1e12:
        raise NotCoprime("Bezout system is singular")
    rhs = np.zeros(D + 1)
    rhs[0] = 1.0
    sol = np.linalg.solve(M, rhs)
    p, q = ZPolynomial(tuple(sol[:d1 + 1])), ZPolynomial(tuple(sol[d1 + 1:]))
    resid = np.asarray((f1 * p + f2 * q - ONE).coeffs)
    if np.max(np.abs(resid)) > 1e-10:
        raise NotCoprime(f"Bezout residual {np.max(np.abs(resid)):.3g}")
    return p, q


def _deflate(c: np.ndarray, tol: float) -> tuple[int, np.ndarray]:
    """Multiplicity of the root at 0 (tiny leading low-order coefficients) and the quotient."""
    scale = np.max(np.abs(c))
    m = 0
    while m < c.size - 1 and abs(c[m]) <= tol * scale:
        m += 1
    return m, c[m:]


def _shift_to_one(c: np.ndarray) -> np.ndarray:
    """Coefficients of ``f(1 - w)`` in powers of ``w``."""
    out = np.zeros(1)
    for k, a in enumerate(c):
        out = P.polyadd(out, a * P.polypow([1.0, -1.0], k))
    return out


def _cluster(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    left = list(roots)
    out = []
    while left:
        r = left.pop(0)
        group = [r] + [s for s in left if abs(s - r) <= tol * max(1.0, abs(r))]
        left = [s for s in left if abs(s - r) > tol * max(1.0, abs(r))]
        out.append((complex(np.mean(group)), len(group)))
    return out


def _on_circle(zr: complex) -> bool:
    """Real roots in ``[0, 1]`` are points of the unit circle in ``u``."""
    return abs(zr.imag) <= 1e-6 and 0.0 <= zr.real <= 1.0


def _pair_circle_roots(roots: list, tol: float) -> list:
    """Merge neighbouring simple real roots in ``[0, 1]``.

    A nonnegative polynomial has only even-order roots inside ``[0, 1]``, so
    two nearby odd-order roots there are a double root split by rounding.
    """
    odd = sorted((r for r in roots if _on_circle(r[0]) and r[1] % 2), key=lambda r: r[0].real)
    out = [r for r in roots if not (_on_circle(r[0]) and r[1] % 2)]
    i = 0
    while i < len(odd):
        if i + 1 < len(odd) and abs(odd[i + 1][0] - odd[i][0]) <= tol:
            (a, ma), (b, mb) = odd[i], odd[i + 1]
            out.append(((a * ma + b * mb) / (ma + mb), ma + mb))
            i += 2
        else:
            out.append(odd[i])
            i += 1
    return out


def _polish(taps: np.ndarray, coeffs: np.ndarray, steps: int = 50) -> np.ndarray:
    """Gauss-Newton on ``sum_i b_i b_{i+k} = r_k`` for cosine coefficients ``coeffs``.

    Root finding loses digits at near-double roots; a few steps recover them.
    """
    n = taps.size - 1
    r = coeffs[: n + 1] * np.r_[1.0, np.full(n, 0.5)]
    idx = np.arange(n + 1)

    def resid(b):
        return np.correlate(b, b, "full")[n:] - r

    best, best_err = taps, np.max(np.abs(resid(taps)))
    b = taps
    for _ in range(steps):
        pad = np.r_[np.zeros(n), b, np.zeros(n)]
        jac = pad[n + idx[None, :] + idx[:, None]] + pad[n + idx[None, :] - idx[:, None]]
        b = b - np.linalg.lstsq(jac, resid(b), rcond=None)[0]
        err = np.max(np.abs(resid(b)))
        if not err < best_err:
            break
        best, best_err = b, err
    return best


def riesz_factor(tau: CosinePolynomial, phase: str = "minimum",
                 grid: GridSpec | None = None) -> FiniteSequence:
    """Real ``b`` with ``|b^(xi)|**2 = tau(xi)``.

    Roots are found in ``z = sin(pi xi)**2``.  Each root ``z_r`` gives the
    reciprocal pair ``u = v +- sqrt(v**2 - 1)``, ``v = 1 - 2 z_r``, in
    ``u = e^{-2 pi i xi}``; one member of every pair becomes a root of ``b``.
    Roots with ``z_r`` real in ``[0, 1]`` lie on the unit circle and are
    split evenly between the pair.

    Parameters
    ----------
    tau : CosinePolynomial
        Must be nonnegative.
    phase : {"minimum", "principal"}
        ``"minimum"`` keeps the member inside the unit disc.  ``"principal"``
        keeps ``v + sqrt(v**2 - 1)`` with the principal square root.

    Raises
    ------
    NotNonnegative
        If ``tau`` dips below ``-1e-10``.
    OddCircleRoot
        If a unit-circle root has odd multiplicity.
    """
    if phase not in ("minimum", "principal"):
        raise BadParams("phase must be 'minimum' or 'principal'")
    grid = grid or GridSpec.for_degree(tau.degree, minimum=4096, oversample=4)
    vals = tau(grid.xi)
    if vals.min() < -1e-10:
        raise NotNonnegative(f"tau reaches {vals.min():.3g}")
    if tau.degree == 0:
        return FiniteSequence.delta(0, np.sqrt(max(tau.coeffs[0], 0.0)))

    zc = np.asarray(tau.to_z().coeffs)
    # negligible leading terms would put roots near infinity and overflow
    big = np.abs(zc) > 1e-14 * np.max(np.abs(zc))
    zc = zc[: np.nonzero(big)[0][-1] + 1]
    degree = zc.size - 1
    if zc.size == 1:
        return FiniteSequence.delta(0, np.sqrt(max(zc[0], 0.0)))
    m0, zc = _deflate(zc, 1e-13)
    m1, _ = _deflate(_shift_to_one(zc), 1e-13)
    if m1:
        zc = P.polydiv(zc, P.polypow([1.0, -1.0], m1))[0]
    roots = _cluster(P.polyroots(zc), 1e-6) if zc.size > 1 else []
    # Near an endpoint a root inside [0, 1] belongs to the endpoint when it
    # completes an even count there or is odd (odd order is only allowed at
    # the endpoint itself); roots just outside stay off the circle.
    kept = []
    for zr, mult in roots:
        near0 = abs(zr) <= 1e-6 and (m0 or (mult % 2 and _on_circle(zr)))
        near1 = abs(zr - 1) <= 1e-6 and (m1 or (mult % 2 and _on_circle(zr)))
        if near0:
            m0 += mult
        elif near1:
            m1 += mult
        else:
            kept.append((zr, mult))
    kept = _pair_circle_roots(kept, 1e-4)
    # exact roots at z = 0 and z = 1 are u = 1 and u = -1 of half multiplicity
    u_roots = [1.0] * m0 + [-1.0] * m1
    for zr, mult in kept:
        v = 1 - 2 * zr
        if _on_circle(zr):
            if mult % 2:
                raise OddCircleRoot(f"root at z = {zr.real:.6g} has odd multiplicity {mult}")
            e = np.exp(1j * np.arccos(np.clip(v.real, -1, 1)))
            u_roots += [e, np.conj(e)] * (mult // 2)
            continue
        up = v + np.sqrt(v * v - 1)
        if phase == "minimum" and abs(up) > 1:
            up = 1 / up
        u_roots += [up] * mult

    taps = np.real(P.polyfromroots(u_roots)) if u_roots else np.ones(1)
    b = FiniteSequence.centered(taps)
    bv = np.abs(eval_ft_grid(b, grid)) ** 2
    k = int(np.argmax(vals))
    b = b * np.sqrt(vals[k] / bv[k])
    if len(b) <= degree + 1:
        taps = np.r_[b.taps, np.zeros(degree + 1 - len(b))]
        b = FiniteSequence(b.offset, _polish(taps, np.asarray(tau.coeffs)))
    s0 = float(np.sum(b.taps))
    if abs(s0) <= 1e-8 * b.l1():
        s0 = float(b.taps[np.argmax(np.abs(b.taps))])
    return b * (-1.0 if s0 < 0 else 1.0)


def _check_nonnegative(f: ZPolynomial, label: str):
    z = np.linspace(0.0, 1.0, 4097)
    if f(z).min() < -1e-10:
        raise NegativeFactor(f"factor {label} is negative on [0, 1]")


def pr_triplet_design(theta0: float, theta1: float) -> FilterBank:
    """Perfect-reconstruction bank ``{h, g^1, g^2}`` from two Bezout identities.

    With ``s0 = sin(theta0)``, ``s1 = sin(theta1)`` and ``z = sin(pi xi)**2``:

        (s0^2 - z)^2 (1 - z) p + z^2 q = 1
        (1 - z)^2 r + z (s1^2 - z)^2 s = 1

    so that ``|h^|**2 = (s0^2 - z)^2 (1 - z) p``,
    ``|g1^|**2 = z^2 (1 - z)^2 q r`` and ``|g2^|**2 = z^3 (s1^2 - z)^2 q s``
    add up to one.  Each factor is spectrally factorized with principal
    root selection.  ``h^`` then vanishes at ``xi = 1/2`` and at
    ``xi = +-theta0 / pi``; ``g2^`` at ``0`` and at ``+-theta1 / pi``.
    """
    if not 0 < theta1 < theta0 < np.pi / 2:
        raise BadParams("need 0 < theta1 < theta0 < pi/2")
    s0, s1 = np.sin(theta0) ** 2, np.sin(theta1) ** 2
    a0 = ZPolynomial.of(s0, -1.0)
    a1 = ZPolynomial.of(s1, -1.0)
    omz = ZPolynomial.of(1.0, -1.0)
    f1 = a0 ** 2 * omz
    p, q = bezout_solve(f1, Z ** 2, 1, 2)
    r, s = bezout_solve(omz ** 2, Z * a1 ** 2, 2, 1)
    for f, label in ((p, "p"), (q, "q"), (r, "r"), (s, "s")):
        _check_nonnegative(f, label)
    factors = [f1 * p, Z ** 2 * omz ** 2 * q * r, Z ** 3 * a1 ** 2 * q * s]
    h, g1, g2 = (riesz_factor(f.to_cosine(), phase="principal") for f in factors)
    return FilterBank(h, (g1, g2), "pr-triplet")
