"""Command-line driver.

Exit status: 0 on success, 2 on an invalid configuration, 3 when the register
would exceed the photon limit.
"""
from __future__ import annotations

import argparse
import json
import sys

from .harness import ConfigError, RunConfig, run, sweep_csv, sweep_probe
from .pcm import ProbeParams
from .state_core import SizeError

EXIT_CONFIG = 2
EXIT_SIZE = 3


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logicbell",
        description="Exhaustive and sampled verification of two-step logic Bell "
                    "and C-GHZ state analysis with parity-check measurements.")
    p.add_argument("--mode", choices=["bell", "cghz", "general"], default="bell")
    p.add_argument("--n", type=int, default=2, help="number of logic qubits")
    p.add_argument("--m", type=int, default=2, help="photons per logic qubit")
    p.add_argument("--alpha", type=float, help="coherent probe amplitude")
    p.add_argument("--theta", type=float, help="cross-Kerr phase per photon (rad)")
    p.add_argument("--trials", type=int, help="sampled trials per input state")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true",
                   help="enumerate every branch (default when --trials is absent)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--alphas", type=_floats, help="comma-separated alpha grid for a sweep")
    p.add_argument("--thetas", type=_floats, help="comma-separated theta grid for a sweep")
    p.add_argument("--workers", type=int, default=1,
                   help="processes for sampled runs; output does not depend on it")
    p.add_argument("--timing", action="store_true",
                   help="record wall time in the JSON report (breaks byte-identity)")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.exact and args.trials is not None:
        raise ConfigError("--exact and --trials are mutually exclusive")
    if (args.alpha is None) != (args.theta is None):
        raise ConfigError("--alpha and --theta must be given together")
    probe = None
    if args.alpha is not None:
        try:
            probe = ProbeParams(args.alpha, args.theta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    exact = args.trials is None
    return RunConfig(mode=args.mode, n_logic=args.n, m=args.m, probe=probe,
                     trials=args.trials if args.trials is not None else 0,
                     seed=args.seed, exact=exact, output_format=args.format,
                     workers=args.workers).validate()


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        config = config_from_args(args)
        if args.alphas is not None or args.thetas is not None:
            reports = sweep_probe(config, args.alphas or [], args.thetas or [])
            if config.output_format == "csv":
                text = sweep_csv(reports)
            else:
                text = json.dumps([r.to_dict(args.timing) for r in reports], indent=2) + "\n"
        else:
            text = run(config).render(args.timing)
    except SizeError as exc:
        print(f"logicbell: size overflow: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except ConfigError as exc:
        print(f"logicbell: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
