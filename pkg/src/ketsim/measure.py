"""Probabilistic readout: exact distributions, prefix marginals, shot sampling.

Measuring a state returns basis string k with probability |b_k|^2. Prefix
measurement reads only the first n qubits, marginalizing over the rest.
Sampling realizes repeated measurement as seeded inverse-CDF draws; the
post-measurement state is deliberately not modeled, so sampling consumes a
distribution rather than a state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .states import QuantumState

PROB_SUM_ATOL = 1e-12

# Algorithm identifier recorded in measurement records. Same-build runs with
# equal (dist, shots, seed) reproduce counts exactly; bit-identity across
# different generator implementations is not promised.
RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact outcome probabilities keyed by bit-string (MSB first)."""

    n_measured: int
    probs: dict[str, float]

    def __post_init__(self):
        for key in self.probs:
            if len(key) != self.n_measured or set(key) - {"0", "1"}:
                raise InvalidInputError(
                    f"outcome key {key!r} is not a {self.n_measured}-bit string"
                )
        total = float(sum(self.probs.values()))
        if abs(total - 1.0) > PROB_SUM_ATOL:
            raise InvalidInputError(
                f"outcome probabilities sum to {total!r}, not 1"
            )

    def probability(self, bits: str) -> float:
        """Probability of one outcome, 0 for outcomes not present."""
        return self.probs.get(bits, 0.0)


@dataclass(frozen=True)
class MeasurementRecord:
    """Shot histogram from sampling a distribution with a seeded generator."""

    shots: int
    seed: int
    counts: dict[str, int]
    rng: str = field(default=RNG_ALGORITHM)

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise InvalidInputError("histogram counts must sum to the shot count")


def probabilities(state: QuantumState) -> OutcomeDistribution:
    """Full readout law: each nonzero amplitude k contributes |amps[k]|^2."""
    probs = np.abs(state.amps) ** 2
    n = state.n
    return OutcomeDistribution(
        n,
        {
            format(k, f"0{n}b"): float(probs[k])
            for k in np.flatnonzero(state.amps)
        },
    )


def prefix_distribution(state: QuantumState, n_first: int) -> OutcomeDistribution:
    """Marginal over the first n_first qubits.

    probs[x] sums |amplitude|^2 over every suffix of x; with
    n_first = state.n this coincides with probabilities() exactly.
    """
    if not 1 <= n_first <= state.n:
        raise InvalidInputError(
            f"n_first must be in [1, {state.n}], got {n_first}"
        )
    per_basis = np.abs(state.amps) ** 2
    marginal = per_basis.reshape(1 << n_first, -1).sum(axis=1)
    return OutcomeDistribution(
        n_first,
        {
            format(x, f"0{n_first}b"): float(marginal[x])
            for x in np.flatnonzero(marginal)
        },
    )


def sample(dist: OutcomeDistribution, shots: int, seed: int) -> MeasurementRecord:
    """Draw shot outcomes by inverse CDF over keys in lexicographic order.

    Deterministic: identical (dist, shots, seed) yields identical counts.
    """
    if shots < 1:
        raise InvalidInputError(f"shots must be >= 1, got {shots}")
    keys = sorted(dist.probs)
    cdf = np.cumsum([dist.probs[k] for k in keys])
    rng = np.random.default_rng(seed)
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    # Guard against u landing beyond cdf[-1] when the sum is 1 - epsilon.
    draws = np.minimum(draws, len(keys) - 1)
    tallies = np.bincount(draws, minlength=len(keys))
    counts = {k: int(c) for k, c in zip(keys, tallies) if c}
    return MeasurementRecord(shots=shots, seed=seed, counts=counts)
