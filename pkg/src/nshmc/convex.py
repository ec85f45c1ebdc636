"""Scalar convex functions, subgradients, and proximity operators.

The proximity operator of a proper convex function f at a point x is the
unique minimizer of

    u  ->  f(u) + (u - x)^2 / 2.

Closed forms are provided for the handful of energies the samplers need
(weighted absolute value, power laws, absolute value plus a quadratic, and
the shifted l1-plus-quadratic energy used for wavelet denoising).  A slow
bracketing/golden-section solver doubles as an independent check on every
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ScalarConvexFn",
    "abs_fn",
    "scaled_abs_fn",
    "power_fn",
    "quad_l1_fn",
    "custom_fn",
    "subgrad_abs_sample",
    "prox_soft_threshold",
    "prox_power",
    "prox_quad_l1",
    "prox_denoise_energy",
    "prox_numeric_oracle",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_BRACKET = 2.0**60


@dataclass(frozen=True)
class ScalarConvexFn:
    """A proper convex function on the real line.

    ``kind`` names the family ("abs", "scaled_abs", "power", "quad_l1" or
    "custom") and ``params`` holds its constants.  ``fn`` evaluates the
    function and must be convex; nothing here verifies that, but the test
    suite samples the secant inequality for every built-in.
    """

    kind: str
    params: dict
    fn: Callable[[float], float]

    def __call__(self, u: float) -> float:
        return self.fn(u)


def abs_fn() -> ScalarConvexFn:
    """|u|."""
    return ScalarConvexFn("abs", {}, abs)


def scaled_abs_fn(t: float) -> ScalarConvexFn:
    """t * |u| for t > 0."""
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"scale must be finite and positive, got {t}")
    return ScalarConvexFn("scaled_abs", {"t": t}, lambda u: t * abs(u))


def power_fn(gamma: float, p: float) -> ScalarConvexFn:
    """|u|**p / gamma for gamma > 0 and p >= 1."""
    _check_power_params(gamma, p)
    return ScalarConvexFn(
        "power", {"gamma": gamma, "p": p}, lambda u: abs(u) ** p / gamma
    )


def quad_l1_fn(a: float, b: float) -> ScalarConvexFn:
    """a * |u| + b * u**2 for a > 0, b >= 0."""
    _check_quad_l1_params(a, b)
    return ScalarConvexFn(
        "quad_l1", {"a": a, "b": b}, lambda u: a * abs(u) + b * u * u
    )


def custom_fn(evaluator: Callable[[float], float]) -> ScalarConvexFn:
    """Wrap an arbitrary convex evaluator (convexity is the caller's promise)."""
    return ScalarConvexFn("custom", {}, evaluator)


def _check_power_params(gamma: float, p: float) -> None:
    if not (math.isfinite(gamma) and gamma > 0):
        raise ValueError(f"gamma must be finite and positive, got {gamma}")
    if not (math.isfinite(p) and p >= 1):
        raise ValueError(f"p must be finite and >= 1, got {p}")


def _check_quad_l1_params(a: float, b: float) -> None:
    if not (math.isfinite(a) and a > 0):
        raise ValueError(f"a must be finite and positive, got {a}")
    if not (math.isfinite(b) and b >= 0):
        raise ValueError(f"b must be finite and non-negative, got {b}")


def subgrad_abs_sample(x, rng: np.random.Generator):
    """Draw an element of the subdifferential of u -> |u| at x.

    Away from zero the subdifferential is the singleton {sign(x)}; at zero it
    is the whole interval [-1, 1], from which a point is drawn uniformly.
    Accepts scalars or arrays (elementwise).
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("subgradient sampling requires finite input")
    out = np.sign(arr)
    zero = arr == 0.0
    nzero = int(np.count_nonzero(zero))
    if nzero:
        out = np.where(zero, 0.0, out)  # keep dtype when arr is 0-d
        draws = rng.uniform(-1.0, 1.0, size=nzero)
        if out.ndim == 0:
            out = np.asarray(draws[0])
        else:
            out[zero] = draws
    if np.ndim(x) == 0:
        return float(out)
    return out


def prox_soft_threshold(x, t: float):
    """Soft thresholding, the proximity operator of u -> t * |u|.

    Shrinks x toward zero by t and clips the dead zone [-t, t] to zero.
    Accepts scalars or arrays.
    """
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"threshold must be finite and positive, got {t}")
    arr = np.asarray(x, dtype=float)
    out = np.sign(arr) * np.maximum(np.abs(arr) - t, 0.0)
    if np.ndim(x) == 0:
        return float(out)
    return out


def prox_power(x: float, gamma: float, p: float) -> float:
    """Proximity operator of u -> |u|**p / gamma at a scalar x.

    p = 1 reduces to soft thresholding at 1/gamma and p = 2 has the linear
    closed form gamma * x / (gamma + 2).  Any other exponent is solved
    numerically (no further closed forms are special-cased): the minimizer
    shares the sign of x, so the stationarity equation

        (p / gamma) * u**(p - 1) + u - |x| = 0

    is solved on (0, |x|) by safeguarded Newton iteration.
    """
    _check_power_params(gamma, p)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if p == 1.0:
        return prox_soft_threshold(float(x), 1.0 / gamma)
    if p == 2.0:
        return gamma * x / (gamma + 2.0)
    if x == 0.0:
        return 0.0
    r = _power_stationary_point(abs(x), gamma, p)
    r = min(max(r, 0.0), abs(x))
    return math.copysign(r, x)


def _power_stationary_point(x: float, gamma: float, p: float) -> float:
    """Root of (p/gamma) u**(p-1) + u - x = 0 for x > 0, p > 1.

    The left side is increasing, negative at 0 and positive at x, so the
    root lies in (0, x).  Newton steps are clipped back into the shrinking
    bisection bracket, which keeps the iteration safe for every p.
    """
    c = p / gamma
    lo, hi = 0.0, x
    u = x / (1.0 + c)  # exact for p = 2, a decent start otherwise
    for _ in range(100):
        h = c * u ** (p - 1.0) + u - x
        if h > 0.0:
            hi = u
        elif h < 0.0:
            lo = u
        else:
            return u
        slope = c * (p - 1.0) * u ** (p - 2.0) + 1.0
        step = h / slope
        nxt = u - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - u) < 1e-15 * (1.0 + abs(u)):
            return nxt
        u = nxt
    return u


def prox_quad_l1(x, a: float, b: float):
    """Proximity operator of u -> a * |u| + b * u**2.

    Soft thresholds at a and then shrinks by the quadratic factor 1 + 2b:
    sign(x) * max(|x| - a, 0) / (1 + 2b).  Accepts scalars or arrays.
    """
    _check_quad_l1_params(a, b)
    arr = np.asarray(x, dtype=float)
    out = np.sign(arr) * np.maximum(np.abs(arr) - a, 0.0) / (1.0 + 2.0 * b)
    if np.ndim(x) == 0:
        return float(out)
    return out


def prox_denoise_energy(
    x: np.ndarray, obs_coeffs: np.ndarray, alpha: float, lam: float
) -> np.ndarray:
    """Proximity operator of the wavelet denoising energy, componentwise.

    The energy is U(u) = ||u||_1 / lam + alpha * ||u - c||^2 / 2 with c the
    wavelet coefficients of the observation.  Completing the square gives

        p_i = soft_threshold((x_i + alpha * c_i) / (1 + alpha), 1 / (lam * (1 + alpha))).
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be finite and positive, got {alpha}")
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError(f"lam must be finite and positive, got {lam}")
    x = np.asarray(x, dtype=float)
    c = np.asarray(obs_coeffs, dtype=float)
    if x.shape != c.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {c.shape}")
    shifted = (x + alpha * c) / (1.0 + alpha)
    return prox_soft_threshold(shifted, 1.0 / (lam * (1.0 + alpha)))


def _golden_shrink(g, a, b, stop_width):
    """Golden-section on a unimodal g; works for float or mpmath operands."""
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    while b - a > stop_width:
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - _INV_GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INV_GOLDEN * (b - a)
            gd = g(d)
    return a, b


def prox_numeric_oracle(f: ScalarConvexFn, x: float, tol: float = 1e-10) -> float:
    """Minimize f(u) + (u - x)^2 / 2 by bracketing plus golden-section search.

    The bracket starts at [x - |x| - 1, x + |x| + 1] and doubles outward
    until the midpoint value drops below both endpoint values, which for a
    convex objective certifies an interior minimizer.  Golden-section then
    shrinks the bracket below ``tol``.

    Double precision alone cannot place a minimizer this accurately from
    function values (comparisons drown in rounding noise once the bracket
    is narrower than about sqrt(eps * g)), so the last stretch reruns the
    search with 30-digit mpmath arithmetic on a safely padded bracket.  The
    evaluator therefore sees ``mpmath.mpf`` arguments during that stage;
    plain arithmetic on them works unchanged.  Deliberately slow and
    simple; this is the reference other operators are tested against.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol}")
    fn = f.fn

    def g(u):
        return fn(u) + 0.5 * (u - x) * (u - x)

    lo = x - abs(x) - 1.0
    hi = x + abs(x) + 1.0
    glo, ghi = g(lo), g(hi)
    while True:
        if hi - lo > _MAX_BRACKET:
            raise ValueError(
                "bracket expansion exceeded 2**60: objective has no minimizer "
                "(is the function convex?)"
            )
        gmid = g(0.5 * (lo + hi))
        if gmid <= glo and gmid <= ghi:
            break
        width = hi - lo
        if glo < ghi:
            lo -= width
            glo = g(lo)
        else:
            hi += width
            ghi = g(hi)

    # Coarse stage in doubles: cheap, and reliable down to this width.
    a, b = _golden_shrink(g, lo, hi, 1e-6)
    mid = 0.5 * (a + b)
    # The quadratic term keeps the curvature of g at or above 1, so double
    # precision misplaces the coarse bracket by at most about sqrt(eps * g);
    # this pad clears that and the 5e-7 half-width with two decades to spare.
    pad = 1e-5 * (1.0 + math.sqrt(abs(g(mid)) + 1.0))

    import mpmath

    with mpmath.workdps(30):

        def g_mp(u):
            return fn(u) + (u - x) * (u - x) / 2

        stop = mpmath.mpf(tol) / 100
        a_mp, b_mp = _golden_shrink(
            g_mp, mpmath.mpf(mid) - pad, mpmath.mpf(mid) + pad, stop
        )
        return float((a_mp + b_mp) / 2)
