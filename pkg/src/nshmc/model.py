"""Target distributions, potential energies, and phase-space state.

The central family is the generalized Gaussian

    GG(x; gamma, p) = p / (2 * gamma**(1/p) * Gamma(1/p)) * exp(-|x|**p / gamma),

whose potential energy E(x) = |x|**p / gamma is convex but loses
differentiability at the origin when p = 1.  Laplace (p = 1) and Gaussian
(p = 2) are special cases.  Multivariate targets are built as products of
independent coordinates.

A ``PotentialEnergy`` bundles the evaluator with whatever first-order
handles the energy supports: an exact gradient, a subgradient sampler, and
a proximity operator.  Integrators check for the handle they need and fail
loudly when it is missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammainc, gammaln

from .convex import prox_power, prox_quad_l1, prox_soft_threshold, subgrad_abs_sample

__all__ = [
    "CapabilityError",
    "GGParams",
    "IGParams",
    "PhaseState",
    "PotentialEnergy",
    "gg_density",
    "gg_cdf",
    "gg_energy",
    "quad_l1_energy",
    "gaussian_momentum_sample",
    "gg_direct_sample",
    "ig_sample",
    "hamiltonian_eval",
]


class CapabilityError(ValueError):
    """An energy lacks the first-order handle an algorithm asked for."""


@dataclass(frozen=True)
class GGParams:
    """Scale gamma > 0 and exponent p >= 1 of a generalized Gaussian."""

    gamma: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be finite and positive, got {self.gamma}")
        if not (math.isfinite(self.p) and self.p >= 1):
            raise ValueError(f"p must be finite and >= 1, got {self.p}")


@dataclass(frozen=True)
class IGParams:
    """Shape and scale of an inverse gamma distribution, both positive."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.shape) and self.shape > 0):
            raise ValueError(f"shape must be finite and positive, got {self.shape}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be finite and positive, got {self.scale}")


class PhaseState:
    """Position/momentum pair, stored as equal-length float vectors."""

    __slots__ = ("position", "momentum")

    def __init__(self, position, momentum):
        x = np.atleast_1d(np.asarray(position, dtype=float))
        q = np.atleast_1d(np.asarray(momentum, dtype=float))
        if x.ndim != 1 or x.shape != q.shape:
            raise ValueError(
                f"position and momentum must be equal-length vectors, "
                f"got shapes {x.shape} and {q.shape}"
            )
        if not (np.isfinite(x).all() and np.isfinite(q).all()):
            raise ValueError("phase-space state must be finite")
        self.position = x
        self.momentum = q

    def __repr__(self):
        return f"PhaseState(position={self.position!r}, momentum={self.momentum!r})"


@dataclass(frozen=True)
class PotentialEnergy:
    """A convex potential with optional first-order handles.

    value        maps an N-vector to a float.
    grad         exact gradient, present only where the energy is smooth.
    subgrad      (x, rng) -> a sampled element of the subdifferential.
    prox         proximity operator of the full energy.
    dimension    fixed N, or None for separable energies usable at any N.
    """

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    subgrad: Callable[[np.ndarray, np.random.Generator], np.ndarray] | None = None
    prox: Callable[[np.ndarray], np.ndarray] | None = None
    dimension: int | None = None


def gg_density(x, params: GGParams):
    """Generalized Gaussian density, vectorized over x."""
    gamma, p = params.gamma, params.p
    lognorm = math.log(p) - math.log(2.0) - math.log(gamma) / p - gammaln(1.0 / p)
    arr = np.asarray(x, dtype=float)
    out = np.exp(lognorm - np.abs(arr) ** p / gamma)
    if np.ndim(x) == 0:
        return float(out)
    return out


def gg_cdf(x, params: GGParams):
    """Generalized Gaussian distribution function, via the regularized
    lower incomplete gamma function."""
    gamma, p = params.gamma, params.p
    arr = np.asarray(x, dtype=float)
    tail = gammainc(1.0 / p, np.abs(arr) ** p / gamma)
    out = 0.5 + 0.5 * np.sign(arr) * tail
    if np.ndim(x) == 0:
        return float(out)
    return out


def gg_energy(params: GGParams, dimension: int | None = None) -> PotentialEnergy:
    """Potential energy E(x) = sum_i |x_i|**p / gamma of an i.i.d. GG vector.

    The proximity operator is applied coordinatewise.  For p = 1 the
    subgradient sampler draws uniformly from [-1/gamma, 1/gamma] at zero
    coordinates; for p > 1 the subdifferential is the gradient singleton.
    An exact ``grad`` handle is only attached for even integer p, where the
    energy is smooth in the classical sense used by the plain integrator.
    """
    gamma, p = params.gamma, params.p

    if p == 1.0:

        def value(x):
            return float(np.sum(np.abs(x))) / gamma

        def prox(x):
            return prox_soft_threshold(np.asarray(x, dtype=float), 1.0 / gamma)

        def subgrad(x, rng):
            return np.asarray(subgrad_abs_sample(x, rng)) / gamma

        return PotentialEnergy(
            value=value, subgrad=subgrad, prox=prox, dimension=dimension
        )

    def value(x):
        return float(np.sum(np.abs(x) ** p)) / gamma

    def gradient(x):
        x = np.asarray(x, dtype=float)
        return (p / gamma) * np.sign(x) * np.abs(x) ** (p - 1.0)

    if p == 2.0:

        def prox(x):
            return gamma * np.asarray(x, dtype=float) / (gamma + 2.0)

    else:

        def prox(x):
            x = np.asarray(x, dtype=float)
            return np.array([prox_power(xi, gamma, p) for xi in x])

    # For p > 1 the subdifferential is a singleton everywhere, so the
    # sampler is deterministic and the rng goes unused.
    def subgrad(x, rng):
        return gradient(x)

    grad = gradient if (p == int(p) and int(p) % 2 == 0) else None
    return PotentialEnergy(
        value=value, grad=grad, subgrad=subgrad, prox=prox, dimension=dimension
    )


def quad_l1_energy(a: float, b: float, dimension: int | None = None) -> PotentialEnergy:
    """Potential energy sum_i a * |x_i| + b * x_i**2.

    The prototypical non-smooth test energy: kinked at zero, quadratic in
    the tails.  Its subdifferential at zero is a * [-1, 1] (the quadratic
    part contributes nothing there), sampled uniformly.
    """
    if not (math.isfinite(a) and a > 0):
        raise ValueError(f"a must be finite and positive, got {a}")
    if not (math.isfinite(b) and b >= 0):
        raise ValueError(f"b must be finite and non-negative, got {b}")

    def value(x):
        x = np.asarray(x, dtype=float)
        return float(a * np.sum(np.abs(x)) + b * np.sum(x * x))

    def subgrad(x, rng):
        x = np.asarray(x, dtype=float)
        return a * np.asarray(subgrad_abs_sample(x, rng)) + 2.0 * b * x

    def prox(x):
        return prox_quad_l1(np.asarray(x, dtype=float), a, b)

    return PotentialEnergy(value=value, subgrad=subgrad, prox=prox, dimension=dimension)


def gaussian_momentum_sample(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an N(0, I_n) momentum vector."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return rng.standard_normal(n)


def gg_direct_sample(params: GGParams, rng: np.random.Generator, size=None):
    """Exact generalized Gaussian draws.

    If G is Gamma(1/p, 1) then (gamma * G)**(1/p) has the law of |X|, so a
    draw is a symmetric random sign times that power transform.  Used as
    ground truth when judging the Markov chain samplers.
    """
    gamma, p = params.gamma, params.p
    g = rng.gamma(1.0 / p, 1.0, size=size)
    sign = np.where(rng.random(size=size) < 0.5, -1.0, 1.0)
    out = sign * (gamma * g) ** (1.0 / p)
    if size is None:
        return float(out)
    return out


def ig_sample(params: IGParams, rng: np.random.Generator, size=None):
    """Inverse gamma draws: 1/G with G gamma-distributed, shape a, rate b.

    The density is proportional to t**(-a-1) * exp(-b/t); for a > 1 the
    mean is b / (a - 1).
    """
    g = rng.gamma(params.shape, 1.0 / params.scale, size=size)
    out = 1.0 / g
    if size is None:
        return float(out)
    return out


def hamiltonian_eval(state: PhaseState, energy: PotentialEnergy) -> float:
    """Total energy H(x, q) = E(x) + q.q / 2."""
    x, q = state.position, state.momentum
    if energy.dimension is not None and x.size != energy.dimension:
        raise ValueError(
            f"state dimension {x.size} does not match energy dimension "
            f"{energy.dimension}"
        )
    return float(energy.value(x)) + 0.5 * float(q @ q)
