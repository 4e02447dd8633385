"""Dense state vectors over polarization photons.

Photon ``p`` of an ``n``-photon register is bit ``n - 1 - p`` of the amplitude
index (photon 0 is the most significant bit), with H = 0 and V = 1. All
operations return new states and never mutate their inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

MAX_PHOTONS = 24
TOL = 1e-12

_SQRT2_INV = 1 / np.sqrt(2)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV
BITFLIP = np.array([[0, 1], [1, 0]], dtype=complex)


class SizeError(ValueError):
    """Register size outside 1..MAX_PHOTONS."""


class Basis(Enum):
    Z = "Z"
    X = "X"


@dataclass(frozen=True, eq=False)
class PureState:
    n_photons: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_size(self.n_photons)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n_photons:
            raise ValueError(
                f"expected {1 << self.n_photons} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if norm < TOL:
            raise ValueError("zero state cannot be normalized")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_photons)

    def support(self, tol: float = TOL) -> list[tuple[int, ...]]:
        """Bit strings carrying nonzero amplitude."""
        idx = np.flatnonzero(np.abs(self.amplitudes) ** 2 > tol)
        return [index_to_bits(int(i), self.n_photons) for i in idx]

    def __repr__(self):
        terms = []
        for bits in self.support():
            amp = self.amplitudes[bits_to_index(bits)]
            ket = "".join("HV"[b] for b in bits)
            terms.append(f"({amp.real:+.4f}{amp.imag:+.4f}j)|{ket}>")
        return f"PureState(n={self.n_photons}: " + " ".join(terms) + ")"


@dataclass(frozen=True)
class MeasuredBit:
    photon: int
    basis: Basis
    outcome: int  # 0 = H or |+>, 1 = V or |->
    probability: float


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_PHOTONS:
        raise SizeError(f"register must hold 1..{MAX_PHOTONS} photons, got {n}")


def _check_photon(state: PureState, photon: int) -> None:
    if not 0 <= photon < state.n_photons:
        raise IndexError(
            f"photon {photon} out of range for {state.n_photons}-photon state")


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - p)) & 1 for p in range(n))


def _from_normalized(n: int, amps: np.ndarray) -> PureState:
    # Skips the renormalising constructor path for already-normalized vectors.
    state = object.__new__(PureState)
    amps = np.ascontiguousarray(amps, dtype=complex).reshape(-1)
    amps.setflags(write=False)
    object.__setattr__(state, "n_photons", n)
    object.__setattr__(state, "amplitudes", amps)
    return state


def basis_state(bits: Sequence[int]) -> PureState:
    """Computational basis ket; ``bits`` may be 0/1 or 'H'/'V'."""
    bits = [_as_bit(b) for b in bits]
    _check_size(len(bits))
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[bits_to_index(bits)] = 1.0
    return _from_normalized(len(bits), amps)


def _as_bit(b) -> int:
    if isinstance(b, str):
        return {"H": 0, "V": 1}[b.upper()]
    if b not in (0, 1):
        raise ValueError(f"polarization bit must be 0/1 or H/V, got {b!r}")
    return int(b)


def from_terms(n: int, terms: dict[str, complex]) -> PureState:
    """Build a state from ket strings, e.g. ``{"HH": 1, "VV": -1}``."""
    amps = np.zeros(1 << n, dtype=complex)
    for ket, amp in terms.items():
        if len(ket) != n:
            raise ValueError(f"ket {ket!r} does not have {n} photons")
        amps[bits_to_index([_as_bit(c) for c in ket])] += amp
    return PureState(n, amps)


def tensor(a: PureState, b: PureState) -> PureState:
    n = a.n_photons + b.n_photons
    _check_size(n)
    return _from_normalized(n, np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Sequence[PureState]) -> PureState:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def apply_single(state: PureState, matrix: np.ndarray, photon: int) -> PureState:
    """Apply a 2x2 unitary to one photon."""
    _check_photon(state, photon)
    n = state.n_photons
    psi = state.amplitudes.reshape(1 << photon, 2, 1 << (n - 1 - photon))
    h, v = psi[:, 0, :], psi[:, 1, :]
    out = np.empty_like(psi)
    out[:, 0, :] = matrix[0, 0] * h + matrix[0, 1] * v
    out[:, 1, :] = matrix[1, 0] * h + matrix[1, 1] * v
    return _from_normalized(n, out)


def apply_hadamard(state: PureState, photon: int) -> PureState:
    return apply_single(state, HADAMARD, photon)


def apply_bitflip(state: PureState, photon: int) -> PureState:
    _check_photon(state, photon)
    return _from_normalized(
        state.n_photons, np.flip(state.as_tensor(), axis=photon))


def apply_hadamard_all(state: PureState, photons: Sequence[int]) -> PureState:
    for p in photons:
        state = apply_hadamard(state, p)
    return state


def measure_branches(state: PureState, photon: int, basis: Basis = Basis.Z,
                     tol: float = TOL) -> list[tuple[MeasuredBit, PureState | None]]:
    """All outcomes of a destructive single-photon measurement.

    Each entry pairs the outcome record with the renormalized residual, which
    has the measured photon removed (``None`` when no photons remain).
    Zero-probability outcomes are dropped.
    """
    if state.n_photons < 1:
        raise SizeError("nothing left to measure")
    _check_photon(state, photon)
    psi = np.moveaxis(state.as_tensor(), photon, 0)
    if basis is Basis.X:
        psi = np.tensordot(HADAMARD, psi, axes=([1], [0]))
    out = []
    for outcome in (0, 1):
        part = psi[outcome]
        p = float(np.vdot(part, part).real)
        if p <= tol:
            continue
        record = MeasuredBit(photon, basis, outcome, p)
        if state.n_photons == 1:
            out.append((record, None))
        else:
            out.append((record, _from_normalized(
                state.n_photons - 1, part / np.sqrt(p))))
    return out


def measure_photon(state: PureState, photon: int, basis: Basis = Basis.Z,
                   random_draw: float = 0.0) -> tuple[MeasuredBit, PureState | None]:
    """Sample one measurement outcome; ``random_draw < p0`` selects outcome 0."""
    branches = measure_branches(state, photon, basis)
    if len(branches) == 1:
        return branches[0]
    first, second = branches
    return first if random_draw < first[0].probability else second


def inner(a: PureState, b: PureState) -> complex:
    if a.n_photons != b.n_photons:
        raise ValueError(
            f"dimension mismatch: {a.n_photons} vs {b.n_photons} photons")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    return min(1.0, abs(inner(a, b)) ** 2)


def same_state(a: PureState, b: PureState, tol: float = TOL) -> bool:
    return a.n_photons == b.n_photons and fidelity(a, b) > 1 - tol
