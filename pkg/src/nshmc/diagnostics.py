"""Chain and image quality diagnostics.

Histogram mean squared error measures how closely a sample histogram
tracks a target density; the autocorrelation function measures mixing
speed; SNR and SSIM score reconstructed images against a reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import convolve2d

__all__ = [
    "HistogramSpec",
    "histogram_mse",
    "acf",
    "snr",
    "ssim",
]


@dataclass(frozen=True)
class HistogramSpec:
    """Binning of the real line used by histogram_mse: [lo, hi) split into
    equal-width bins."""

    lo: float = -5.0
    hi: float = 5.0
    bins: int = 50

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("histogram range must be finite")
        if self.hi <= self.lo:
            raise ValueError(f"need hi > lo, got [{self.lo}, {self.hi}]")
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins}")

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.bins

    @property
    def centers(self) -> np.ndarray:
        edges = np.linspace(self.lo, self.hi, self.bins + 1)
        return 0.5 * (edges[:-1] + edges[1:])


def histogram_mse(
    samples: np.ndarray, pdf: Callable[[float], float], spec: HistogramSpec
) -> float:
    """Mean squared error between a density-normalized histogram and a pdf.

    Bin heights are count / (n * width) with n the total number of samples,
    compared against the pdf at bin centers.  At least one sample must land
    inside the histogram range.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("histogram_mse needs at least one sample")
    counts, _ = np.histogram(x, bins=spec.bins, range=(spec.lo, spec.hi))
    if counts.sum() == 0:
        raise ValueError(
            f"no samples inside histogram range [{spec.lo}, {spec.hi}]"
        )
    heights = counts / (x.size * spec.width)
    target = np.asarray([float(pdf(c)) for c in spec.centers])
    return float(np.mean((heights - target) ** 2))


def acf(chain: np.ndarray, max_lag: int) -> np.ndarray:
    """Empirical autocorrelation at lags 0..max_lag (biased estimator).

    rho_k = sum_t (x_t - xbar)(x_{t+k} - xbar) / sum_t (x_t - xbar)^2,
    so rho_0 is exactly 1.  The chain must be longer than max_lag and must
    not be constant.
    """
    x = np.asarray(chain, dtype=float).ravel()
    if max_lag < 0:
        raise ValueError(f"max_lag must be >= 0, got {max_lag}")
    if x.size <= max_lag:
        raise ValueError(
            f"chain of length {x.size} is too short for max_lag {max_lag}"
        )
    d = x - x.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise ValueError("autocorrelation of a constant chain is undefined")
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for k in range(1, max_lag + 1):
        rho[k] = float(d[:-k] @ d[k:]) / denom
    return rho


def snr(reference: np.ndarray, estimate: np.ndarray) -> float:
    """Signal-to-noise ratio in dB: 10 log10(||ref||^2 / ||ref - est||^2).

    A perfect reconstruction returns +inf.
    """
    ref = np.asarray(reference, dtype=float)
    est = np.asarray(estimate, dtype=float)
    if ref.shape != est.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {est.shape}")
    signal = float(np.sum(ref * ref))
    if signal == 0.0:
        raise ValueError("SNR is undefined for an all-zero reference")
    noise = float(np.sum((ref - est) ** 2))
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def _ssim_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = (size - 1) / 2.0
    g = np.exp(-((np.arange(size) - half) ** 2) / (2.0 * sigma * sigma))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(reference: np.ndarray, estimate: np.ndarray) -> float:
    """Mean structural similarity with the standard settings.

    Gaussian 11x11 window (sigma 1.5), dynamic range 255, stabilizers
    C1 = (0.01 * 255)^2 and C2 = (0.03 * 255)^2.  Local statistics use
    valid-mode windowing, so both images must be at least 11x11.
    """
    x = np.asarray(reference, dtype=float)
    y = np.asarray(estimate, dtype=float)
    if x.ndim != 2 or x.shape != y.shape:
        raise ValueError(f"need equal-shape 2-D images, got {x.shape} and {y.shape}")
    if min(x.shape) < 11:
        raise ValueError(f"images must be at least 11x11, got {x.shape}")
    c1 = (0.01 * 255.0) ** 2
    c2 = (0.03 * 255.0) ** 2
    w = _ssim_window()
    mu_x = convolve2d(x, w, mode="valid")
    mu_y = convolve2d(y, w, mode="valid")
    var_x = convolve2d(x * x, w, mode="valid") - mu_x * mu_x
    var_y = convolve2d(y * y, w, mode="valid") - mu_y * mu_y
    cov = convolve2d(x * y, w, mode="valid") - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))
