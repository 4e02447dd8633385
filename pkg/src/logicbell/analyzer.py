"""Two-step logic Bell and C-GHZ state analysis.

Each analysis is a fixed schedule of steps (Hadamards, parity checks,
destructive single-photon measurements) plus a classifier that maps the
recorded outcomes to a label. The same schedule is either enumerated
exactly, branching on every outcome, or walked once with random draws.

Photon layout follows :mod:`logicbell.states`: with two photons per logic
qubit, photon ``2i`` is the left mode and ``2i + 1`` the right mode of logic
qubit ``i``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .pcm import (ParityOutcome, PcmRecord, ProbeParams, pcm_branches,
                  pcm_error_probability, pcm_sample_physical)
from .state_core import (TOL, Basis, MeasuredBit, PureState, apply_hadamard,
                         bits_to_index, fidelity, measure_branches, measure_photon)
from .states import CghzLabel, Group, LogicBellLabel, Sign

Label = Union[LogicBellLabel, CghzLabel]
Record = Union[PcmRecord, MeasuredBit]

BRANCH_SUM_TOL = 1e-10


# -- schedule -----------------------------------------------------------------

@dataclass(frozen=True)
class Hadamard:
    photons: tuple[int, ...]


@dataclass(frozen=True)
class Parity:
    i: int
    j: int


@dataclass(frozen=True)
class Measure:
    photon: int
    basis: Basis = Basis.Z


Step = Union[Hadamard, Parity, Measure]


@dataclass(frozen=True)
class Protocol:
    """A fixed measurement schedule.

    ``checkpoint`` is the number of steps after which the intermediate state
    is kept on every branch (the end of the group-identification stage).
    ``pattern`` extracts the group-identification PCM bits from the records
    and ``classify`` turns the full record sequence into a label.
    ``predict`` returns the state expected at the checkpoint for a branch, or
    None when no prediction applies.
    """
    n_photons: int
    steps: tuple[Step, ...]
    checkpoint: int
    classify: Callable[[Sequence[Record]], Label]
    pattern: Callable[[Sequence[Record]], str]
    predict: Callable[[Sequence[Record], Label], PureState | None] | None = None


# -- results ------------------------------------------------------------------

@dataclass
class BranchNode:
    outcome_sequence: tuple[Record, ...]
    probability: float
    verdict: Label
    pattern: str
    final_state_checked: bool = False
    checkpoint_state: PureState | None = field(default=None, repr=False)

    @property
    def pcm_records(self) -> list[PcmRecord]:
        return [r for r in self.outcome_sequence if isinstance(r, PcmRecord)]

    @property
    def measured_bits(self) -> list[MeasuredBit]:
        return [r for r in self.outcome_sequence if isinstance(r, MeasuredBit)]


@dataclass
class AnalysisReport:
    input_label: Label | None
    branches: list[BranchNode]
    confusion_row: dict[str, float]

    @property
    def verdict(self) -> Label:
        """Most probable verdict."""
        best = max(self.confusion_row, key=self.confusion_row.get)
        for b in self.branches:
            if str(b.verdict) == best:
                return b.verdict
        raise LookupError(best)

    def pattern_table(self) -> dict[str, float]:
        table: dict[str, float] = defaultdict(float)
        for b in self.branches:
            table[b.pattern] += b.probability
        return dict(sorted(table.items()))

    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)


def _report(input_label, branches):
    row: dict[str, float] = defaultdict(float)
    for b in branches:
        row[str(b.verdict)] += b.probability
    return AnalysisReport(input_label, branches, dict(row))


# -- execution modes ----------------------------------------------------------

@dataclass(frozen=True)
class Enumerator:
    """Exact recursion over every outcome; ``probe`` adds misreport branches."""
    probe: ProbeParams | None = None
    check_states: bool = True
    tol: float = TOL


@dataclass
class Sampler:
    """One trajectory per call, driven by ``rng.random()`` draws."""
    rng: np.random.Generator
    probe: ProbeParams | None = None
    check_states: bool = False


def _apply(state: PureState, step: Hadamard) -> PureState:
    for p in step.photons:
        state = apply_hadamard(state, p)
    return state


def enumerate_protocol(state: PureState, protocol: Protocol,
                       pcm: Enumerator = Enumerator()) -> list[BranchNode]:
    if state.n_photons != protocol.n_photons:
        raise ValueError(
            f"protocol expects {protocol.n_photons} photons, state has {state.n_photons}")
    p_err = pcm_error_probability(pcm.probe) if pcm.probe is not None else 0.0
    leaves: list[BranchNode] = []

    def recurse(psi, k, prob, records, snap):
        if k == protocol.checkpoint:
            snap = psi
        if k == len(protocol.steps):
            leaves.append(_leaf(protocol, tuple(records), prob, snap, pcm.check_states))
            return
        step = protocol.steps[k]
        if isinstance(step, Hadamard):
            recurse(_apply(psi, step), k + 1, prob, records, snap)
        elif isinstance(step, Parity):
            for outcome, p, collapsed in pcm_branches(psi, step.i, step.j, pcm.tol):
                for flip, q in ((False, 1 - p_err), (True, p_err)):
                    if q <= pcm.tol:
                        continue
                    shown = outcome.flipped() if flip else outcome
                    rec = PcmRecord((step.i, step.j), shown, p, misreported=flip)
                    recurse(collapsed, k + 1, prob * p * q, records + [rec], snap)
        else:
            for rec, residual in measure_branches(psi, step.photon, step.basis, pcm.tol):
                recurse(residual, k + 1, prob * rec.probability, records + [rec], snap)

    recurse(state, 0, 1.0, [], None)
    return leaves


def sample_protocol(state: PureState, protocol: Protocol, pcm: Sampler) -> BranchNode:
    if state.n_photons != protocol.n_photons:
        raise ValueError(
            f"protocol expects {protocol.n_photons} photons, state has {state.n_photons}")
    records: list[Record] = []
    prob = 1.0
    psi, snap = state, None
    for k, step in enumerate(protocol.steps):
        if k == protocol.checkpoint:
            snap = psi
        if isinstance(step, Hadamard):
            psi = _apply(psi, step)
        elif isinstance(step, Parity):
            draws = (pcm.rng.random(), pcm.rng.random())
            rec, psi = pcm_sample_physical(psi, step.i, step.j, pcm.probe, draws)
            records.append(rec)
            prob *= rec.probability
        else:
            rec, psi = measure_photon(psi, step.photon, step.basis, pcm.rng.random())
            records.append(rec)
            prob *= rec.probability
    if protocol.checkpoint == len(protocol.steps):
        snap = psi
    return _leaf(protocol, tuple(records), prob, snap, pcm.check_states)


def _leaf(protocol, records, prob, snap, check) -> BranchNode:
    verdict = protocol.classify(records)
    checked = False
    if check and protocol.predict is not None and snap is not None:
        expected = protocol.predict(records, verdict)
        checked = expected is not None and fidelity(expected, snap) > 1 - BRANCH_SUM_TOL
    return BranchNode(records, prob, verdict, protocol.pattern(records),
                      checked, snap)


def run_protocol(state: PureState, protocol: Protocol,
                 pcm: Enumerator | Sampler | None = None,
                 input_label: Label | None = None) -> AnalysisReport:
    if pcm is None:
        pcm = Enumerator()
    if isinstance(pcm, Sampler):
        return _report(input_label, [sample_protocol(state, protocol, pcm)])
    return _report(input_label, enumerate_protocol(state, protocol, pcm))


# -- checkpoint predictions ---------------------------------------------------

def _bits_from_parities(parities: Sequence[int]) -> list[int]:
    bits = [0]
    for p in parities:
        bits.append(bits[-1] ^ p)
    return bits


def predicted_collapse(n_logic: int, left_parities: Sequence[int],
                       right_parities: Sequence[int], sign: Sign) -> PureState:
    """Product of a left and a right GHZ-type state fixed by the parity results.

    With true parities ``l`` on the left chain the left photons sit in
    ``(|x> + s|not x>)/sqrt(2)`` with ``x_0 = 0, x_{i+1} = x_i ^ l_i``; the right
    photons likewise. Photons interleave as left ``2i``, right ``2i + 1``.
    """
    x = _bits_from_parities(left_parities)
    y = _bits_from_parities(right_parities)
    n = 2 * n_logic
    amps = np.zeros(1 << n, dtype=complex)
    s = sign.factor
    for lx, lc in ((x, 1), ([1 - b for b in x], s)):
        for ry, rc in ((y, 1), ([1 - b for b in y], s)):
            bits = [v for pair in zip(lx, ry) for v in pair]
            amps[bits_to_index(bits)] += lc * rc
    return PureState(n, amps)


def _true_bits(records: Sequence[PcmRecord]) -> list[int]:
    return [r.true_outcome.value for r in records]


def _reported_bits(records: Sequence[PcmRecord]) -> list[int]:
    return [r.outcome.value for r in records]


# -- logic Bell analysis ------------------------------------------------------

def logic_bell_protocol() -> Protocol:
    """Hadamard all four photons, PCM a1b1 = (0, 2) and a2b2 = (1, 3), then
    Hadamard photons 0 and 2 and PCM them again: even => +, odd => -."""
    steps = (Hadamard((0, 1, 2, 3)), Parity(0, 2), Parity(1, 3),
             Hadamard((0, 2)), Parity(0, 2))

    def classify(records):
        first, second, final = records
        group = Group.PHI if first.outcome is second.outcome else Group.PSI
        sign = Sign.PLUS if final.outcome is ParityOutcome.EVEN else Sign.MINUS
        return LogicBellLabel(group, sign)

    def pattern(records):
        return "".join(map(str, _reported_bits(records[:2])))

    def predict(records, verdict):
        left, right = _true_bits(records[:2])
        return predicted_collapse(2, [left], [right], verdict.sign)

    return Protocol(4, steps, 3, classify, pattern, predict)


def analyze_logic_bell(state: PureState, pcm: Enumerator | Sampler | None = None,
                       input_label: Label | None = None) -> AnalysisReport:
    if state.n_photons != 4:
        raise ValueError(f"logic Bell analysis needs 4 photons, got {state.n_photons}")
    return run_protocol(state, logic_bell_protocol(), pcm, input_label)


# -- C-GHZ analysis -----------------------------------------------------------

def cghz_protocol(n_logic: int) -> Protocol:
    """Hadamard everything; PCM left pairs (2i, 2i+2) then right pairs
    (2i+1, 2i+3); Hadamard the left photons and Z-measure them. The group bit
    at position i is set when left and right outcomes differ there, and the
    sign follows the parity of the V count."""
    if n_logic < 2:
        raise ValueError("C-GHZ analysis needs at least two logic qubits")
    n = 2 * n_logic
    left = [Parity(2 * i, 2 * i + 2) for i in range(n_logic - 1)]
    right = [Parity(2 * i + 1, 2 * i + 3) for i in range(n_logic - 1)]
    # Measure highest index first so earlier photon indices stay valid.
    readout = [Measure(2 * i) for i in reversed(range(n_logic))]
    steps = (Hadamard(tuple(range(n))), *left, *right,
             Hadamard(tuple(range(0, n, 2))), *readout)
    n_pcm = 2 * (n_logic - 1)

    def classify(records):
        pcms = _reported_bits(records[:n_pcm])
        lbits, rbits = pcms[:n_logic - 1], pcms[n_logic - 1:]
        group_bits = tuple(int(a != b) for a, b in zip(lbits, rbits))
        v_count = sum(r.outcome for r in records[n_pcm:])
        return CghzLabel(group_bits, Sign.from_parity(v_count % 2))

    def pattern(records):
        return "".join(map(str, _reported_bits(records[:n_pcm])))

    def predict(records, verdict):
        bits = _true_bits(records[:n_pcm])
        return predicted_collapse(n_logic, bits[:n_logic - 1], bits[n_logic - 1:],
                                  verdict.sign)

    return Protocol(n, steps, 1 + n_pcm, classify, pattern, predict)


def analyze_cghz(state: PureState, n_logic: int,
                 pcm: Enumerator | Sampler | None = None,
                 input_label: Label | None = None) -> AnalysisReport:
    if n_logic < 2:
        raise ValueError("C-GHZ analysis needs at least two logic qubits")
    if state.n_photons != 2 * n_logic:
        raise ValueError(
            f"{n_logic} logic qubits need {2 * n_logic} photons, got {state.n_photons}")
    return run_protocol(state, cghz_protocol(n_logic), pcm, input_label)


# -- M > 2 reduction ----------------------------------------------------------

def _reduction_photons(n_logic: int, m: int) -> list[int]:
    """Photons 3..M of every logic qubit, highest index first."""
    return [i * m + r for i in reversed(range(n_logic)) for r in reversed(range(2, m))]


def _flip_flags(n_logic: int, m: int, measured: Sequence[MeasuredBit]) -> tuple[int, ...]:
    flags = [0] * n_logic
    for rec in measured:
        flags[rec.photon // m] ^= rec.outcome
    return tuple(flags)


def _check_general(state: PureState, n_logic: int, m: int) -> None:
    if m < 3:
        raise ValueError(f"reduction needs at least 3 photons per logic qubit, got {m}")
    if state.n_photons != n_logic * m:
        raise ValueError(
            f"{n_logic}x{m} layout needs {n_logic * m} photons, got {state.n_photons}")


def reduce_general(state: PureState, n_logic: int, m: int,
                   draws: Sequence[float] | np.random.Generator
                   ) -> tuple[PureState, tuple[int, ...], list[MeasuredBit]]:
    """X-measure photons 3..M of each logic qubit, leaving two per logic qubit.

    Returns the ``2N``-photon residual, the per-logic-qubit parity of ``|->``
    outcomes and the measurement records. ``draws`` supplies one uniform
    number per measured photon (highest photon index first).
    """
    _check_general(state, n_logic, m)
    photons = _reduction_photons(n_logic, m)
    if isinstance(draws, np.random.Generator):
        draws = draws.random(len(photons))
    if len(draws) < len(photons):
        raise ValueError(f"need {len(photons)} draws, got {len(draws)}")
    measured = []
    for photon, u in zip(photons, draws):
        rec, state = measure_photon(state, photon, Basis.X, u)
        measured.append(rec)
    return state, _flip_flags(n_logic, m, measured), measured


def reduce_general_branches(state: PureState, n_logic: int, m: int, tol: float = TOL
                            ) -> list[tuple[float, PureState, tuple[int, ...], list[MeasuredBit]]]:
    """Every outcome of :func:`reduce_general` with its probability."""
    _check_general(state, n_logic, m)
    out = []

    def recurse(psi, remaining, prob, measured):
        if not remaining:
            out.append((prob, psi, _flip_flags(n_logic, m, measured), measured))
            return
        for rec, residual in measure_branches(psi, remaining[0], Basis.X, tol):
            recurse(residual, remaining[1:], prob * rec.probability, measured + [rec])

    recurse(state, _reduction_photons(n_logic, m), 1.0, [])
    return out


def unflip_label(raw: Label, flip_flags: Sequence[int]) -> Label:
    """Undo the group change caused by sign-flipped logic qubits.

    Flipping logic qubit i toggles the difference bits on both sides of it;
    the sign is unaffected.
    """
    if isinstance(raw, LogicBellLabel):
        return unflip_label(raw.to_cghz(), flip_flags).to_bell()
    if len(flip_flags) != raw.n_logic:
        raise ValueError(f"expected {raw.n_logic} flip flags, got {len(flip_flags)}")
    bits = list(raw.group_bits)
    for i, f in enumerate(flip_flags):
        if f:
            if i > 0:
                bits[i - 1] ^= 1
            if i < len(bits):
                bits[i] ^= 1
    return CghzLabel(tuple(bits), raw.sign)


def general_protocol(n_logic: int, m: int) -> Protocol:
    """Reduction measurements followed by the two-photon-per-qubit analysis."""
    inner = logic_bell_protocol() if n_logic == 2 else cghz_protocol(n_logic)
    if m == 2:
        return inner
    photons = _reduction_photons(n_logic, m)
    n_red = len(photons)
    steps = (*(Measure(p, Basis.X) for p in photons), *inner.steps)

    def classify(records):
        flags = _flip_flags(n_logic, m, records[:n_red])
        return unflip_label(inner.classify(records[n_red:]), flags)

    def pattern(records):
        return inner.pattern(records[n_red:])

    def predict(records, verdict):
        raw = inner.classify(records[n_red:])
        return inner.predict(records[n_red:], raw)

    return Protocol(n_logic * m, steps, n_red + inner.checkpoint,
                    classify, pattern, predict)


def analyze_general(state: PureState, n_logic: int, m: int,
                    pcm: Enumerator | Sampler | None = None,
                    input_label: Label | None = None) -> AnalysisReport:
    """Reduce M-photon logic qubits to pairs, analyze, then correct the label.

    At ``m == 2`` this is exactly :func:`analyze_cghz` (or
    :func:`analyze_logic_bell` for two logic qubits).
    """
    if m != 2:
        _check_general(state, n_logic, m)
    elif state.n_photons != 2 * n_logic:
        raise ValueError(
            f"{n_logic} logic qubits need {2 * n_logic} photons, got {state.n_photons}")
    return run_protocol(state, general_protocol(n_logic, m), pcm, input_label)
