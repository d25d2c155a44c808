"""Command-line entry point: ``oscsig generate|verify|ambiguity|radar|cdma``.

Exit codes: 0 ok, 2 input error, 3 bound-assertion failure, 4 numerical failure.
Set OSCSIG_THREADS to parallelize the pairwise correlation scans.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .applications import MODES, ChannelScenario, cdma_simulate, radar_simulate
from .field import FieldError, PrimeField
from .heisenberg import heisenberg_system
from .io import SignalFileError, load, save
from .metrics import ambiguity_grid, fourier_invariance_check, system_report
from .oscillator import ClusteringError, build_system, extended_system, oscillator_family

EXIT_OK, EXIT_INPUT, EXIT_BOUNDS, EXIT_NUMERIC = 0, 2, 3, 4
KINDS = ("split", "nonsplit", "heisenberg", "extended")


class InputError(Exception):
    pass


def make_system(p: int, kind: str):
    F = PrimeField(p)
    if kind == "heisenberg":
        return heisenberg_system(F)
    if kind == "extended":
        return extended_system(build_system(F, "split"))
    return build_system(F, kind)


def cmd_generate(args) -> int:
    S = make_system(args.p, args.kind)
    save(S, args.out)
    print(f"p={S.p}\nkind={S.kind}\ngroups={len(S.groups)}\nsignals={len(S)}\nout={args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    S = load(args.file)
    both = not (args.assert_proof_bounds or args.report_headline_bounds)
    report = system_report(S, assert_proof=args.assert_proof_bounds or both,
                           headline=args.report_headline_bounds or both, seed=args.seed)
    out = report.to_kv()
    ok = report.ok
    if S.kind in ("split", "nonsplit"):
        table, failures = fourier_invariance_check(S)
        worst = min((m.overlap for m in table), default=1.0)
        out += f"fourier.min_overlap={worst!r}\nfourier.failures={len(failures)}\n"
        out += "".join(f"failure={f}\n" for f in failures)
        ok = ok and not failures
    sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_BOUNDS


def _select(S, label: str):
    try:
        return S.find(label)
    except KeyError:
        raise InputError(f"unknown signal label {label!r}") from None


def cmd_ambiguity(args) -> int:
    S = load(args.file)
    s = _select(S, args.signal)
    mag = np.abs(ambiguity_grid(S.field, s.values))
    rows = [",".join(repr(round(float(x), 12)) for x in row) for row in mag]
    text = "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _source(args):
    if args.file:
        S = load(args.file)
        return S.field, S
    F = PrimeField(args.p)
    return F, oscillator_family(F, args.kind)


def _scenario(args) -> ChannelScenario:
    snr = None if args.noiseless else args.snr_db
    return ChannelScenario(args.scenario, snr, args.seed, args.trials)


def _snr_text(args) -> str:
    return "none" if args.noiseless or args.snr_db is None else repr(args.snr_db)


def cmd_radar(args) -> int:
    F, S = _source(args)
    if args.file and args.signal:
        phi = _select(S, args.signal).values
    else:
        phi = S[args.index].values
    result = radar_simulate(F, phi, _scenario(args))
    sys.stdout.write(result.to_kv({"p": F.p, "scenario": args.scenario,
                                   "snr_db": _snr_text(args),
                                   "noise_model": "circular-gaussian snr=1/(p*sigma^2)"}))
    return EXIT_OK


def cmd_cdma(args) -> int:
    F, S = _source(args)
    if args.users > len(S):
        raise InputError(f"--users {args.users} exceeds system size {len(S)}")
    result = cdma_simulate(F, S, args.users, _scenario(args), args.known_distortions)
    sys.stdout.write(result.to_kv({"p": F.p, "users": args.users, "scenario": args.scenario,
                                   "known_distortions": str(args.known_distortions).lower(),
                                   "snr_db": _snr_text(args),
                                   "noise_model": "circular-gaussian snr=1/(p*sigma^2)"}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscsig", description="Oscillator and Heisenberg signal systems over prime fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a signal system and write it to a file")
    g.add_argument("--p", type=int, required=True, help="field size, a prime >= 5")
    g.add_argument("--kind", choices=KINDS, default="nonsplit")
    g.add_argument("--out", required=True, help="output JSON path")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a signal-set file against its bounds")
    v.add_argument("file", help="signal-set JSON file")
    v.add_argument("--assert-proof-bounds", action="store_true",
                   help="assert the proof-constant bounds (default: both modes)")
    v.add_argument("--report-headline-bounds", action="store_true",
                   help="report the 2/sqrt(p) and 4/sqrt(p) bounds without asserting")
    v.add_argument("--seed", type=int, default=0, help="seed for sampled pair checks")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("ambiguity", help="write the |A| grid of one signal as CSV")
    a.add_argument("file", help="signal-set JSON file")
    a.add_argument("--signal", required=True, help="label group:character[@tau,w]")
    a.add_argument("--out", help="CSV path (stdout when omitted)")
    a.set_defaults(func=cmd_ambiguity)

    for name, func, helptext in (("radar", cmd_radar, "matched-filter radar simulation"),
                                 ("cdma", cmd_cdma, "multi-user CDMA simulation")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--p", type=int, default=13, help="field size when no --file is given")
        s.add_argument("--kind", choices=("split", "nonsplit"), default="nonsplit")
        s.add_argument("--file", help="signal-set file to draw signals from instead of --p")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--trials", type=int, default=500 if name == "radar" else 1000,
                       help="Monte Carlo trials")
        s.add_argument("--snr-db", type=float, default=None, help="noiseless when omitted")
        s.add_argument("--noiseless", action="store_true", help="ignore --snr-db")
        s.add_argument("--scenario", choices=MODES, default="full",
                       help="which of time shift and phase shift are random")
        if name == "radar":
            s.add_argument("--signal", help="signal label (with --file)")
            s.add_argument("--index", type=int, default=0, help="signal index in the system")
        else:
            s.add_argument("--users", type=int, default=3, help="number of simultaneous users")
            s.add_argument("--known-distortions", action="store_true",
                       help="decode at the true shift of each user")
        s.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FieldError, SignalFileError, InputError, OSError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ClusteringError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
