"""Leapfrog discretizations of Hamiltonian dynamics, smooth and non-smooth.

One step of size eps from (x, q) is

    q_half = q - eps/2 * force(x)
    x_new  = x + eps * q_half
    q_new  = q_half - eps/2 * force(x_new)

where ``force`` depends on the scheme:

    smooth    exact gradient of E (requires a smooth energy),
    subgrad   an element drawn from the subdifferential of E,
    prox      the proximal residual x - prox_E(x).

A trajectory is the plain composition of single steps, so the two half
kicks that meet at an interior point stay separate operations rather than
being merged into one full kick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CapabilityError, PhaseState, PotentialEnergy

__all__ = [
    "SMOOTH",
    "SUBGRAD",
    "PROX",
    "LeapfrogConfig",
    "leapfrog_smooth_step",
    "leapfrog_subgrad_step",
    "leapfrog_prox_step",
    "integrate_trajectory",
]

SMOOTH = "smooth"
SUBGRAD = "subgrad"
PROX = "prox"
_KINDS = (SMOOTH, SUBGRAD, PROX)


@dataclass(frozen=True)
class LeapfrogConfig:
    """Step size and step count of a leapfrog trajectory.

    epsilon = 0 is tolerated as a degenerate edge (every step is the
    identity), which keeps the zero-step-size behavior of the samplers
    testable.
    """

    epsilon: float = 0.05
    steps: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(
                f"epsilon must be finite and non-negative, got {self.epsilon}"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


def leapfrog_smooth_step(
    state: PhaseState, energy: PotentialEnergy, epsilon: float
) -> PhaseState:
    """One leapfrog step driven by the exact gradient."""
    if energy.grad is None:
        raise CapabilityError("smooth leapfrog needs an energy with a gradient")
    x, q = state.position, state.momentum
    q = q - 0.5 * epsilon * energy.grad(x)
    x = x + epsilon * q
    q = q - 0.5 * epsilon * energy.grad(x)
    return PhaseState(x, q)


def leapfrog_subgrad_step(
    state: PhaseState,
    energy: PotentialEnergy,
    epsilon: float,
    rng: np.random.Generator,
) -> PhaseState:
    """One leapfrog step kicked by sampled subgradients.

    At points where the energy is differentiable the subdifferential is the
    gradient singleton and this reproduces ``leapfrog_smooth_step`` exactly.
    """
    if energy.subgrad is None:
        raise CapabilityError(
            "subgradient leapfrog needs an energy with a subgradient sampler"
        )
    x, q = state.position, state.momentum
    q = q - 0.5 * epsilon * energy.subgrad(x, rng)
    x = x + epsilon * q
    q = q - 0.5 * epsilon * energy.subgrad(x, rng)
    return PhaseState(x, q)


def leapfrog_prox_step(
    state: PhaseState, energy: PotentialEnergy, epsilon: float
) -> PhaseState:
    """One leapfrog step kicked by the proximal residual x - prox_E(x).

    The residual is itself a subgradient of E evaluated at prox_E(x), so
    this is a deterministic drop-in for the sampled subgradient kick.
    """
    if energy.prox is None:
        raise CapabilityError("proximal leapfrog needs an energy with a prox handle")
    x, q = state.position, state.momentum
    q = q - 0.5 * epsilon * (x - energy.prox(x))
    x = x + epsilon * q
    q = q - 0.5 * epsilon * (x - energy.prox(x))
    return PhaseState(x, q)


def integrate_trajectory(
    state: PhaseState,
    energy: PotentialEnergy,
    config: LeapfrogConfig,
    kind: str,
    rng: np.random.Generator | None = None,
) -> PhaseState:
    """Compose ``config.steps`` leapfrog steps of the requested scheme."""
    if kind not in _KINDS:
        raise ValueError(f"unknown integrator kind {kind!r}; expected one of {_KINDS}")
    if kind == SUBGRAD and rng is None:
        raise ValueError("subgradient scheme needs an rng for subdifferential draws")
    eps = config.epsilon
    for _ in range(config.steps):
        if kind == SMOOTH:
            state = leapfrog_smooth_step(state, energy, eps)
        elif kind == SUBGRAD:
            state = leapfrog_subgrad_step(state, energy, eps, rng)
        else:
            state = leapfrog_prox_step(state, energy, eps)
    return state
