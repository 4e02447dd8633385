"""Two-photon parity-check measurement (PCM).

The ideal gate projects a photon pair onto the even span{HH, VV} or odd
span{HV, VH} subspace without destroying the photons. The physical model
adds a cross-Kerr coherent probe read out by X-quadrature homodyne: even
pairs leave the probe at X mean ``2*alpha``, odd pairs rotate it by
``+-2*theta`` to X mean ``2*alpha*cos(2*theta)`` (unit variance in both
cases, X = a + a^dagger). A midpoint threshold then misreports the parity
with probability ``pcm_error_probability``; the collapse itself always
follows the true parity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import erfc

from .state_core import TOL, PureState, _from_normalized


class ParityOutcome(Enum):
    EVEN = 0
    ODD = 1

    def flipped(self) -> "ParityOutcome":
        return ParityOutcome(1 - self.value)


@dataclass(frozen=True)
class ProbeParams:
    alpha: float
    theta: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.theta <= math.pi / 4:
            raise ValueError(f"theta must lie in (0, pi/4], got {self.theta}")

    @property
    def separation(self) -> float:
        """Distance between the even and odd X-quadrature means."""
        return 2 * self.alpha * (1 - math.cos(2 * self.theta))


@dataclass(frozen=True)
class PcmRecord:
    pair: tuple[int, int]
    outcome: ParityOutcome  # as reported by the detector
    probability: float
    misreported: bool = False

    @property
    def true_outcome(self) -> ParityOutcome:
        return self.outcome.flipped() if self.misreported else self.outcome


def _check_pair(state: PureState, i: int, j: int) -> None:
    n = state.n_photons
    if i == j:
        raise ValueError(f"PCM needs two distinct photons, got ({i}, {j})")
    for p in (i, j):
        if not 0 <= p < n:
            raise IndexError(f"photon {p} out of range for {n}-photon state")


@lru_cache(maxsize=256)
def parity_mask(n: int, i: int, j: int) -> np.ndarray:
    """Boolean mask over amplitude indices: True where photons i, j differ."""
    idx = np.arange(1 << n)
    mask = (((idx >> (n - 1 - i)) ^ (idx >> (n - 1 - j))) & 1).astype(bool)
    mask.setflags(write=False)
    return mask


def pcm_branches(state: PureState, i: int, j: int,
                 tol: float = TOL) -> list[tuple[ParityOutcome, float, PureState]]:
    """Nonzero parity branches with their probabilities and collapsed states."""
    _check_pair(state, i, j)
    odd = parity_mask(state.n_photons, i, j)
    out = []
    for outcome, mask in ((ParityOutcome.EVEN, ~odd), (ParityOutcome.ODD, odd)):
        amps = np.where(mask, state.amplitudes, 0)
        p = float(np.vdot(amps, amps).real)
        if p > tol:
            out.append((outcome, p, _from_normalized(state.n_photons, amps / np.sqrt(p))))
    return out


def pcm_sample(state: PureState, i: int, j: int,
               random_draw: float) -> tuple[PcmRecord, PureState]:
    """Ideal PCM; ``random_draw`` below P(even) selects the even branch."""
    branches = pcm_branches(state, i, j)
    outcome, p, collapsed = branches[0]
    if len(branches) == 2 and random_draw >= p:
        outcome, p, collapsed = branches[1]
    return PcmRecord((i, j), outcome, p), collapsed


def pcm_error_probability(probe: ProbeParams) -> float:
    """Midpoint-threshold misclassification probability of the homodyne readout."""
    return 0.5 * float(erfc(probe.separation / (2 * math.sqrt(2))))


def pcm_sample_physical(state: PureState, i: int, j: int, probe: ProbeParams | None,
                        random_draws: Sequence[float]) -> tuple[PcmRecord, PureState]:
    """PCM with homodyne readout error.

    ``random_draws[0]`` picks the true branch exactly as ``pcm_sample`` does;
    the report is flipped when ``random_draws[1] < pcm_error_probability``.
    Passing ``probe=None`` disables the flip.
    """
    record, collapsed = pcm_sample(state, i, j, random_draws[0])
    if probe is not None and random_draws[1] < pcm_error_probability(probe):
        record = PcmRecord(record.pair, record.outcome.flipped(),
                           record.probability, misreported=True)
    return record, collapsed
