"""Markov chain samplers: non-smooth HMC and two Metropolis baselines.

Every kernel shares the same Metropolis accept/reject rule on the total
energy H: a proposal is kept with probability min{1, exp(H_current -
H_proposal)}.  The HMC kernels generate proposals by integrating leapfrog
trajectories with a fresh Gaussian momentum; the baselines are a symmetric
random walk and an independence sampler with a fixed centered Gaussian
proposal (whose acceptance ratio carries the usual proposal correction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrators import PROX, SUBGRAD, LeapfrogConfig, integrate_trajectory
from .model import PhaseState, PotentialEnergy, hamiltonian_eval

__all__ = [
    "SamplerConfig",
    "ChainRecord",
    "SAMPLER_KINDS",
    "mh_accept",
    "nshmc_iteration",
    "rwmh_iteration",
    "indep_mh_iteration",
    "run_chain",
]

SAMPLER_KINDS = ("nshmc1", "nshmc2", "rwmh", "indmh")
_HMC_KINDS = ("nshmc1", "nshmc2")


@dataclass(frozen=True)
class SamplerConfig:
    """Which kernel to run and for how long.

    HMC kinds ("nshmc1" uses subgradient kicks, "nshmc2" proximal kicks)
    carry a leapfrog configuration; the Metropolis kinds ("rwmh", "indmh")
    carry a proposal standard deviation instead.  Missing fields are filled
    with the defaults (eps 0.05, 10 steps, unit proposal).
    """

    kind: str
    iterations: int
    burn_in: int = 0
    seed: int = 0
    leapfrog: LeapfrogConfig | None = None
    proposal_std: float | None = None

    def __post_init__(self):
        if self.kind not in SAMPLER_KINDS:
            raise ValueError(
                f"unknown sampler kind {self.kind!r}; expected one of {SAMPLER_KINDS}"
            )
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError(
                f"burn_in must lie in [0, iterations), got {self.burn_in} "
                f"with iterations {self.iterations}"
            )
        if self.kind in _HMC_KINDS:
            if self.proposal_std is not None:
                raise ValueError(f"proposal_std does not apply to kind {self.kind!r}")
            if self.leapfrog is None:
                object.__setattr__(self, "leapfrog", LeapfrogConfig())
        else:
            if self.leapfrog is not None:
                raise ValueError(f"leapfrog does not apply to kind {self.kind!r}")
            if self.proposal_std is None:
                object.__setattr__(self, "proposal_std", 1.0)
            elif not (math.isfinite(self.proposal_std) and self.proposal_std > 0):
                raise ValueError(
                    f"proposal_std must be finite and positive, got {self.proposal_std}"
                )


@dataclass(frozen=True)
class ChainRecord:
    """Everything a finished chain produced.

    ``samples`` has one row per iteration (including burn-in);
    ``accepted`` flags which iterations moved; ``kept`` strips burn-in.
    """

    samples: np.ndarray
    accepted: np.ndarray
    acceptance_rate: float
    burn_in: int = 0

    @property
    def kept(self) -> np.ndarray:
        return self.samples[self.burn_in :]


def mh_accept(h_current: float, h_proposal: float, rng: np.random.Generator) -> bool:
    """Metropolis test on total energies: accept with min{1, exp(dH)}.

    An infinite proposal energy always rejects; NaN on either side is a
    domain error rather than a silent rejection.
    """
    if math.isnan(h_current) or math.isnan(h_proposal):
        raise ValueError("NaN Hamiltonian passed to the Metropolis test")
    if not math.isfinite(h_current):
        raise ValueError(f"current Hamiltonian must be finite, got {h_current}")
    if h_proposal == -math.inf:
        raise ValueError("proposal Hamiltonian is -inf")
    # log u < 0 <= dH accepts without querying exp, so no overflow possible.
    return math.log(rng.random()) < h_current - h_proposal


def nshmc_iteration(
    x: np.ndarray,
    energy: PotentialEnergy,
    config: SamplerConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, bool]:
    """One HMC transition: fresh momentum, leapfrog trajectory, Metropolis test."""
    if config.kind not in _HMC_KINDS:
        raise ValueError(f"nshmc_iteration got a non-HMC config kind {config.kind!r}")
    x = np.asarray(x, dtype=float)
    q = rng.standard_normal(x.size)
    start = PhaseState(x, q)
    scheme = SUBGRAD if config.kind == "nshmc1" else PROX
    proposal = integrate_trajectory(start, energy, config.leapfrog, scheme, rng)
    h0 = hamiltonian_eval(start, energy)
    h1 = hamiltonian_eval(proposal, energy)
    if mh_accept(h0, h1, rng):
        return proposal.position, True
    return x, False


def rwmh_iteration(
    x: np.ndarray,
    energy: PotentialEnergy,
    proposal_std: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, bool]:
    """One random-walk Metropolis transition with N(x, std^2 I) proposals.

    The proposal is symmetric, so the test reduces to the potential energy
    difference.
    """
    x = np.asarray(x, dtype=float)
    proposal = x + proposal_std * rng.standard_normal(x.size)
    dlog = float(energy.value(x)) - float(energy.value(proposal))
    if math.isnan(dlog):
        raise ValueError("NaN energy difference in random-walk Metropolis")
    if math.log(rng.random()) < dlog:
        return proposal, True
    return x, False


def indep_mh_iteration(
    x: np.ndarray,
    energy: PotentialEnergy,
    proposal_std: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, bool]:
    """One independence-Metropolis transition with fixed N(0, std^2 I) proposals.

    Because the proposal ignores the current state, the acceptance ratio
    picks up the proposal-density correction (|x*|^2 - |x|^2) / (2 std^2) on
    top of the energy difference.
    """
    x = np.asarray(x, dtype=float)
    proposal = proposal_std * rng.standard_normal(x.size)
    dlog = float(energy.value(x)) - float(energy.value(proposal))
    dlog += (float(proposal @ proposal) - float(x @ x)) / (2.0 * proposal_std**2)
    if math.isnan(dlog):
        raise ValueError("NaN acceptance ratio in independence Metropolis")
    if math.log(rng.random()) < dlog:
        return proposal, True
    return x, False


def run_chain(
    initial: np.ndarray, energy: PotentialEnergy, config: SamplerConfig
) -> ChainRecord:
    """Run one chain from ``initial`` and record every state.

    The generator is seeded from ``config.seed`` alone, so a rerun with the
    same config reproduces the chain bit for bit.  Rejected iterations
    repeat the previous state.
    """
    rng = np.random.default_rng(config.seed)
    x = np.atleast_1d(np.asarray(initial, dtype=float)).copy()
    if x.ndim != 1:
        raise ValueError(f"initial state must be a vector, got shape {x.shape}")
    if energy.dimension is not None and x.size != energy.dimension:
        raise ValueError(
            f"initial state dimension {x.size} does not match energy "
            f"dimension {energy.dimension}"
        )
    n_iter = config.iterations
    samples = np.empty((n_iter, x.size))
    accepted = np.empty(n_iter, dtype=bool)
    if config.kind in _HMC_KINDS:
        step = lambda x: nshmc_iteration(x, energy, config, rng)
    elif config.kind == "rwmh":
        step = lambda x: rwmh_iteration(x, energy, config.proposal_std, rng)
    else:
        step = lambda x: indep_mh_iteration(x, energy, config.proposal_std, rng)
    for r in range(n_iter):
        x, ok = step(x)
        samples[r] = x
        accepted[r] = ok
    return ChainRecord(
        samples=samples,
        accepted=accepted,
        acceptance_rate=float(accepted.mean()),
        burn_in=config.burn_in,
    )
