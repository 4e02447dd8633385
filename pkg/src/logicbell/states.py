"""Named states: Bell, GHZ, logic Bell and concatenated GHZ (C-GHZ).

Logic qubit ``i`` of an ``N``-logic-qubit register built from ``M``-photon
GHZ blocks owns photons ``i*M .. i*M + M - 1``. For ``M = 2`` photon ``2i`` is
the left-hand mode and ``2i + 1`` the right-hand mode.

C-GHZ labels use adjacent-difference bits: ``group_bits[i] = 1`` iff logic
qubits ``i`` and ``i + 1`` carry opposite GHZ signs in the first branch. The
group index is ``k = 1 + int(group_bits, 2)``, so ``k = 1`` is the all-equal
pattern.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from .state_core import MAX_PHOTONS, PureState, SizeError, tensor_all

_SQRT2_INV = 1 / np.sqrt(2)


class Group(Enum):
    PHI = "Phi"
    PSI = "Psi"


class Sign(Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1

    @classmethod
    def from_parity(cls, odd: int) -> "Sign":
        return cls.MINUS if odd else cls.PLUS

    @classmethod
    def parse(cls, s) -> "Sign":
        if isinstance(s, Sign):
            return s
        return {"+": cls.PLUS, "-": cls.MINUS, 1: cls.PLUS, -1: cls.MINUS}[s]


@dataclass(frozen=True)
class LogicBellLabel:
    group: Group
    sign: Sign

    def __str__(self):
        return f"{self.group.value}{self.sign.value}"

    @classmethod
    def parse(cls, text: str) -> "LogicBellLabel":
        return cls(Group(text[:-1]), Sign.parse(text[-1]))

    def to_cghz(self) -> "CghzLabel":
        return CghzLabel((int(self.group is Group.PSI),), self.sign)


@dataclass(frozen=True)
class CghzLabel:
    group_bits: tuple[int, ...]
    sign: Sign

    def __post_init__(self):
        bits = tuple(int(b) for b in self.group_bits)
        if not bits or any(b not in (0, 1) for b in bits):
            raise ValueError(f"group_bits must be a nonempty 0/1 tuple, got {self.group_bits}")
        object.__setattr__(self, "group_bits", bits)
        object.__setattr__(self, "sign", Sign.parse(self.sign))

    @property
    def n_logic(self) -> int:
        return len(self.group_bits) + 1

    @property
    def k(self) -> int:
        return 1 + int("".join(map(str, self.group_bits)), 2)

    @classmethod
    def from_k(cls, n_logic: int, k: int, sign) -> "CghzLabel":
        if not 1 <= k <= 1 << (n_logic - 1):
            raise ValueError(f"k must lie in 1..{1 << (n_logic - 1)}, got {k}")
        bits = tuple(int(c) for c in format(k - 1, f"0{n_logic - 1}b"))
        return cls(bits, sign)

    def logic_signs(self) -> tuple[int, ...]:
        """First-branch GHZ sign bits (0 = +, 1 = -) of each logic qubit."""
        signs = [0]
        for b in self.group_bits:
            signs.append(signs[-1] ^ b)
        return tuple(signs)

    def to_bell(self) -> LogicBellLabel:
        if self.n_logic != 2:
            raise ValueError("only two-logic-qubit labels map to logic Bell labels")
        return LogicBellLabel(Group.PSI if self.group_bits[0] else Group.PHI, self.sign)

    def __str__(self):
        return f"Phi{self.k}{self.sign.value}"


BELL_LABELS = tuple(LogicBellLabel(g, s) for g in Group for s in Sign)


def cghz_labels(n_logic: int) -> list[CghzLabel]:
    """All 2^N labels ordered by group index, + before -."""
    return [CghzLabel(bits, s)
            for bits in product((0, 1), repeat=n_logic - 1) for s in Sign]


def bell(kind: str, sign) -> PureState:
    """Two-photon Bell state; ``kind`` is 'phi' or 'psi'."""
    s = Sign.parse(sign).factor
    amps = np.zeros(4, dtype=complex)
    if kind.lower() == "phi":
        amps[0b00], amps[0b11] = _SQRT2_INV, s * _SQRT2_INV
    elif kind.lower() == "psi":
        amps[0b01], amps[0b10] = _SQRT2_INV, s * _SQRT2_INV
    else:
        raise ValueError(f"kind must be 'phi' or 'psi', got {kind!r}")
    return PureState(2, amps)


def ghz(m: int, sign) -> PureState:
    if m < 1:
        raise ValueError("GHZ state needs at least one photon")
    if m > MAX_PHOTONS:
        raise SizeError(f"{m} photons exceeds the {MAX_PHOTONS}-photon register limit")
    amps = np.zeros(1 << m, dtype=complex)
    amps[0] = _SQRT2_INV
    amps[-1] = Sign.parse(sign).factor * _SQRT2_INV
    return PureState(m, amps)


def _superpose(a: PureState, b: PureState, sign: Sign) -> PureState:
    return PureState(a.n_photons, a.amplitudes + sign.factor * b.amplitudes)


def cghz_general(n_logic: int, m: int, label: CghzLabel) -> PureState:
    """C-GHZ state of ``n_logic`` logic qubits, each an ``m``-photon GHZ block."""
    if n_logic < 2:
        raise ValueError("C-GHZ states need at least two logic qubits")
    if m < 2:
        raise ValueError("logic qubits need at least two photons")
    if label.n_logic != n_logic:
        raise ValueError(f"label is for {label.n_logic} logic qubits, not {n_logic}")
    if n_logic * m > MAX_PHOTONS:
        raise SizeError(f"{n_logic}x{m} photons exceeds the {MAX_PHOTONS}-photon limit")
    blocks = {0: ghz(m, Sign.PLUS), 1: ghz(m, Sign.MINUS)}
    signs = label.logic_signs()
    first = tensor_all([blocks[s] for s in signs])
    second = tensor_all([blocks[1 - s] for s in signs])
    return _superpose(first, second, label.sign)


def cghz(n_logic: int, label: CghzLabel) -> PureState:
    return cghz_general(n_logic, 2, label)


def logic_bell(label: LogicBellLabel, m: int = 2) -> PureState:
    """Logic Bell state of two logic qubits (photons 0..m-1 and m..2m-1)."""
    plus, minus = ghz(m, Sign.PLUS), ghz(m, Sign.MINUS)
    if label.group is Group.PHI:
        first, second = tensor_all([plus, plus]), tensor_all([minus, minus])
    else:
        first, second = tensor_all([plus, minus]), tensor_all([minus, plus])
    return _superpose(first, second, label.sign)
