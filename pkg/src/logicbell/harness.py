"""Confusion-matrix runs over every labelled input state.

Exact runs enumerate every measurement branch; sampled runs draw one
trajectory per trial. Trial ``t`` of input ``r`` always uses the stream
``SeedSequence(seed, spawn_key=(r, t))``, so results do not depend on how
trials are split between worker processes.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .analyzer import (Enumerator, Sampler, enumerate_protocol, general_protocol,
                       sample_protocol)
from .pcm import ProbeParams, pcm_error_probability
from .state_core import MAX_PHOTONS, SizeError
from .states import BELL_LABELS, cghz_general, cghz_labels, logic_bell

MODES = ("bell", "cghz", "general")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    mode: str = "bell"
    n_logic: int = 2
    m: int = 2
    probe: ProbeParams | None = None
    trials: int = 10_000
    seed: int = 0
    exact: bool = True
    output_format: str = "json"
    workers: int = 1

    def validate(self) -> "RunConfig":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "bell" and (self.n_logic, self.m) != (2, 2):
            raise ConfigError("bell mode requires n=2 and m=2")
        if self.mode == "cghz" and self.m != 2:
            raise ConfigError("cghz mode requires m=2; use general mode for m>=3")
        if self.mode == "general" and self.m < 3:
            raise ConfigError("general mode requires m>=3")
        if self.n_logic < 2:
            raise ConfigError(f"need at least two logic qubits, got {self.n_logic}")
        if self.n_logic * self.m > MAX_PHOTONS:
            raise SizeError(
                f"{self.n_logic} logic qubits x {self.m} photons = "
                f"{self.n_logic * self.m} exceeds the {MAX_PHOTONS}-photon register")
        if not self.exact and self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.output_format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        return self

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        out["probe"] = None if self.probe is None else asdict(self.probe)
        return out


@dataclass
class RunReport:
    config: RunConfig
    labels: list[str]
    confusion_matrix: list[list[float]]
    branch_tables: dict[str, dict[str, float]]
    error_rate: float
    pcm_error_probability: float | None = None
    wall_time: float | None = field(default=None, compare=False)

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "config": self.config.echo(),
            "labels": self.labels,
            "confusion_matrix": self.confusion_matrix,
            "branch_tables": self.branch_tables,
            "error_rate": self.error_rate,
            "pcm_error_probability": self.pcm_error_probability,
            "wall_time_s": self.wall_time if include_timing else None,
        }

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["input", *self.labels])
        for label, row in zip(self.labels, self.confusion_matrix):
            writer.writerow([label, *(repr(float(v)) for v in row)])
        return buf.getvalue()

    def render(self, include_timing: bool = False) -> str:
        if self.config.output_format == "csv":
            return self.to_csv()
        return self.to_json(include_timing)


def labelled_inputs(config: RunConfig):
    """(label, state) pairs for every input of the configured mode."""
    n, m = config.n_logic, config.m
    if n == 2:
        return [(lab, logic_bell(lab, m)) for lab in BELL_LABELS]
    return [(lab, cghz_general(n, m, lab)) for lab in cghz_labels(n)]


def _protocol(config: RunConfig):
    return general_protocol(config.n_logic, config.m)


def _sample_chunk(config: RunConfig, row: int, start: int, stop: int):
    label, state = labelled_inputs(config)[row]
    protocol = _protocol(config)
    verdicts, patterns = Counter(), Counter()
    for t in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(row, t)))
        leaf = sample_protocol(state, protocol, Sampler(rng, config.probe))
        verdicts[str(leaf.verdict)] += 1
        patterns[leaf.pattern] += 1
    return row, verdicts, patterns


def _chunks(trials: int, parts: int):
    size = math.ceil(trials / parts)
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def run(config: RunConfig) -> RunReport:
    config.validate()
    t0 = time.perf_counter()
    inputs = labelled_inputs(config)
    labels = [str(lab) for lab, _ in inputs]
    col = {lab: i for i, lab in enumerate(labels)}
    matrix = [[0.0] * len(labels) for _ in labels]
    tables: dict[str, dict[str, float]] = {}

    if config.exact:
        protocol = _protocol(config)
        pcm = Enumerator(config.probe, check_states=False)
        for r, (lab, state) in enumerate(inputs):
            table: dict[str, float] = defaultdict(float)
            for leaf in enumerate_protocol(state, protocol, pcm):
                matrix[r][col[str(leaf.verdict)]] += leaf.probability
                table[leaf.pattern] += leaf.probability
            tables[labels[r]] = dict(sorted(table.items()))
    else:
        jobs = [(r, s, e) for r in range(len(inputs))
                for s, e in _chunks(config.trials, config.workers)]
        if config.workers > 1:
            with ProcessPoolExecutor(config.workers) as pool:
                results = list(pool.map(_sample_chunk, *zip(*[(config, *j) for j in jobs])))
        else:
            results = [_sample_chunk(config, *j) for j in jobs]
        verdicts = defaultdict(Counter)
        patterns = defaultdict(Counter)
        for r, v, p in results:
            verdicts[r].update(v)
            patterns[r].update(p)
        for r in range(len(inputs)):
            for lab, count in verdicts[r].items():
                matrix[r][col[lab]] = count / config.trials
            tables[labels[r]] = {k: c / config.trials
                                 for k, c in sorted(patterns[r].items())}

    error_rate = 1.0 - sum(matrix[i][i] for i in range(len(labels))) / len(labels)
    p_err = None if config.probe is None else pcm_error_probability(config.probe)
    return RunReport(config, labels, matrix, tables, max(error_rate, 0.0), p_err,
                     time.perf_counter() - t0)


def sweep_probe(config: RunConfig, alphas, thetas) -> list[RunReport]:
    """One report per (alpha, theta) grid point, alpha-major."""
    alphas, thetas = list(alphas), list(thetas)
    if not alphas or not thetas:
        raise ConfigError("probe sweep needs nonempty alpha and theta grids")
    if config.mode not in ("bell", "cghz"):
        raise ConfigError("probe sweeps support bell and cghz modes only")
    reports = []
    for a in alphas:
        for th in thetas:
            try:
                probe = ProbeParams(float(a), float(th))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            reports.append(run(replace(config, probe=probe)))
    return reports


def sweep_csv(reports: list[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "theta", "pcm_error_probability", "error_rate"])
    for rep in reports:
        p = rep.config.probe
        writer.writerow([repr(p.alpha), repr(p.theta),
                         repr(rep.pcm_error_probability), repr(rep.error_rate)])
    return buf.getvalue()
