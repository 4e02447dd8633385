"""Simulation and exhaustive verification of two-step logic Bell-state and
C-GHZ state analysis with parity-check measurements."""

from .analyzer import (AnalysisReport, BranchNode, Enumerator, Sampler,
                       analyze_cghz, analyze_general, analyze_logic_bell,
                       reduce_general, unflip_label)
from .pcm import (ParityOutcome, PcmRecord, ProbeParams, pcm_branches,
                  pcm_error_probability, pcm_sample, pcm_sample_physical)
from .state_core import (Basis, MeasuredBit, PureState, SizeError, apply_bitflip,
                         apply_hadamard, basis_state, fidelity, measure_photon, tensor)
from .states import (BELL_LABELS, CghzLabel, Group, LogicBellLabel, Sign, bell,
                     cghz, cghz_general, cghz_labels, ghz, logic_bell)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "BranchNode", "Enumerator", "Sampler", "analyze_cghz",
    "analyze_general", "analyze_logic_bell", "reduce_general", "unflip_label",
    "ParityOutcome", "PcmRecord", "ProbeParams", "pcm_branches", "pcm_error_probability",
    "pcm_sample", "pcm_sample_physical",
    "Basis", "MeasuredBit", "PureState", "SizeError", "apply_bitflip", "apply_hadamard",
    "basis_state", "fidelity", "measure_photon", "tensor",
    "BELL_LABELS", "CghzLabel", "Group", "LogicBellLabel", "Sign", "bell", "cghz",
    "cghz_general", "cghz_labels", "ghz", "logic_bell",
]
