"""Command-line entry point: ``qccycles {count,girth,chains,oracle}``.

Reports go to standard output.  Phase timings and status lines go to
standard error so that JSON output stays byte-identical between runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

from .chains import ChainError, CycleChain, canonical_key
from .counting import (
    apm_chain_cycles,
    apm_cycle_spectrum,
    base_closed_walks,
    cycle_spectrum,
    cycles_per_chain,
    enumerate_chains,
    girth as chain_girth,
)
from .io import (
    DIGEST_ALGORITHM,
    ExponentFile,
    FormatError,
    SpectrumReport,
    content_digest,
    looks_like_alist,
    parse_alist,
    parse_exponent_file,
)
from .model import ModelError, blocks_from_matrix, lift
from .oracle import ExpansionBudgetExceeded, TannerGraph, bfs_girth, brute_count_cycles

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2

DEFAULT_BUDGET = 20_000_000


class InputError(Exception):
    pass


def _even_length(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 4 or value % 2:
        raise argparse.ArgumentTypeError(f"max length must be an even integer >= 4, got {value}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qccycles",
        description="Exact cycle spectra of QC and APM lifted LDPC Tanner graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, default_length: int, *, chains=False, oracle=False, workers=True, budget=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, metavar="PATH",
                       help="exponent-matrix file (.qc) or alist file; bundled fixture names also resolve")
        p.add_argument("--max-length", type=_even_length, default=default_length, metavar="EVEN_INT",
                       help=f"longest cycle length considered (default {default_length})")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if chains:
            p.add_argument("--emit-chains", action="store_true", help="list canonical chains with their cycle counts")
        if oracle:
            p.add_argument("--oracle-check", action="store_true",
                           help="recount by brute force on the lifted graph and compare")
        if workers:
            p.add_argument("--workers", type=_positive, default=1, metavar="N", help="worker processes for enumeration")
        if budget or oracle:
            p.add_argument("--expansion-budget", type=_positive, default=DEFAULT_BUDGET, metavar="N",
                           help=f"node expansions allowed to the brute-force oracle (default {DEFAULT_BUDGET})")
        return p

    add("count", "cycle spectrum up to --max-length", 12, chains=True, oracle=True)
    add("girth", "shortest cycle length, searched up to --max-length", 24)
    add("chains", "canonical allowable cycle chains up to --max-length", 12)
    add("oracle", "brute-force spectrum of an alist or exponent file", 12, workers=False, budget=True)
    return parser


def _resolve(path_text: str) -> tuple[str, str]:
    path = Path(path_text)
    if path.is_file():
        return path_text, path.read_text()
    bundled = resources.files("qccycles") / "data" / path.name
    if path.parent == Path(".") and bundled.is_file():
        return path_text, bundled.read_text()
    raise InputError(f"cannot read {path_text}: no such file")


def _load(path_text: str) -> tuple[str, str, ExponentFile | TannerGraph]:
    path, text = _resolve(path_text)
    if path.endswith(".alist") or looks_like_alist(text):
        return path, text, parse_alist(text)
    return path, text, parse_exponent_file(text)


def _require_exponent(obj, command: str) -> ExponentFile:
    if not isinstance(obj, ExponentFile):
        raise InputError(f"{command} needs an exponent-matrix file; alist input is only accepted by 'oracle'")
    return obj


def _chain_listing(spec: ExponentFile, l_max: int, workers: int) -> dict[int, list[dict]]:
    design = blocks_from_matrix(spec.base)
    listing: dict[int, list[dict]] = {}
    if spec.is_qc:
        for l, keys in enumerate_chains(design, spec.slopes, l_max, workers).items():
            listing[2 * l] = [
                {"chain": list(key), "cycles": cycles_per_chain(CycleChain.from_flat(key), spec.slopes)}
                for key in sorted(keys)
            ]
    else:
        for l, walks in base_closed_walks(design, l_max).items():
            entries = []
            for pairs in walks:
                n = apm_chain_cycles(CycleChain(pairs), spec.slopes, spec.shifts)
                if n:
                    entries.append({"chain": list(canonical_key(pairs)), "cycles": n})
            listing[2 * l] = sorted(entries, key=lambda e: e["chain"])
    return listing


def _spectrum(spec: ExponentFile, l_max: int, workers: int):
    if spec.is_qc:
        return cycle_spectrum(spec.base, spec.slopes, l_max, workers)
    return apm_cycle_spectrum(spec.base, spec.slopes, spec.shifts, l_max, workers)


def _first_difference(a: dict[int, int], b: dict[int, int]) -> int | None:
    for length in sorted(set(a) | set(b)):
        if a.get(length) != b.get(length):
            return length
    return None


def _emit(report_obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(report_obj.to_json() if hasattr(report_obj, "to_json") else json.dumps(report_obj, indent=2) + "\n")
    else:
        out.write(report_obj.to_text())


def _timings(timings: dict[str, float], err) -> None:
    err.write("timing: " + " ".join(f"{k}={v:.3f}s" for k, v in timings.items()) + "\n")


def _cmd_count(args, out, err) -> int:
    timings = {}
    t0 = time.perf_counter()
    path, text, obj = _load(args.input)
    spec = _require_exponent(obj, "count")
    timings["parse"] = time.perf_counter() - t0
    l_max = args.max_length // 2

    t0 = time.perf_counter()
    spectrum = _spectrum(spec, l_max, args.workers)
    timings["count"] = time.perf_counter() - t0

    chains = None
    if args.emit_chains:
        t0 = time.perf_counter()
        chains = _chain_listing(spec, l_max, args.workers)
        timings["chains"] = time.perf_counter() - t0

    status = EXIT_OK
    oracle = None
    if args.oracle_check:
        t0 = time.perf_counter()
        graph = TannerGraph.from_lifted(lift(spec.base, spec.slopes, spec.shifts))
        brute = brute_count_cycles(graph, l_max, args.expansion_budget)
        timings["oracle"] = time.perf_counter() - t0
        diff = _first_difference(spectrum.counts, brute.counts)
        if diff is None:
            oracle = {"verdict": "match"}
            err.write("oracle: match\n")
        else:
            oracle = {
                "verdict": "mismatch",
                "first_difference": diff,
                "chains": spectrum.counts.get(diff),
                "oracle": brute.counts.get(diff),
            }
            err.write(f"oracle: mismatch at length {diff} "
                      f"(chains {spectrum.counts.get(diff)}, oracle {brute.counts.get(diff)})\n")
            status = EXIT_MISMATCH

    report = SpectrumReport(
        path=path,
        digest=content_digest(text),
        m=spec.m,
        max_length=args.max_length,
        girth=spectrum.girth,
        counts=spectrum.counts,
        chains=chains,
        oracle=oracle,
        timings=timings,
    )
    _emit(report, args.format, out)
    _timings(timings, err)
    return status


def _cmd_chains(args, out, err) -> int:
    t0 = time.perf_counter()
    path, text, obj = _load(args.input)
    spec = _require_exponent(obj, "chains")
    parse_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    listing = _chain_listing(spec, args.max_length // 2, args.workers)
    counts = {length: sum(e["cycles"] for e in entries) for length, entries in listing.items()}
    girth = next((length for length in sorted(counts) if counts[length]), None)
    report = SpectrumReport(path, content_digest(text), spec.m, args.max_length, girth, counts, chains=listing)
    _emit(report, args.format, out)
    _timings({"parse": parse_time, "chains": time.perf_counter() - t0}, err)
    return EXIT_OK


def _cmd_girth(args, out, err) -> int:
    t0 = time.perf_counter()
    path, text, obj = _load(args.input)
    parse_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    if isinstance(obj, ExponentFile):
        m = obj.m
        g = chain_girth(obj.base, obj.slopes, obj.shifts, args.max_length // 2)
    else:
        m = None
        g = bfs_girth(obj)
        if g is not None and g > args.max_length:
            g = None
    payload = {
        "input": {"path": path, "digest": content_digest(text), "digest_algorithm": DIGEST_ALGORITHM},
        "m": m,
        "max_length": args.max_length,
        "girth": g,
    }
    if args.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(f"girth: {g if g is not None else f'none up to {args.max_length}'}\n")
    _timings({"parse": parse_time, "girth": time.perf_counter() - t0}, err)
    return EXIT_OK


def _cmd_oracle(args, out, err) -> int:
    t0 = time.perf_counter()
    path, text, obj = _load(args.input)
    if isinstance(obj, ExponentFile):
        m = obj.m
        graph = TannerGraph.from_lifted(lift(obj.base, obj.slopes, obj.shifts))
    else:
        m = None
        graph = obj
    parse_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    spectrum = brute_count_cycles(graph, args.max_length // 2, args.expansion_budget)
    report = SpectrumReport(path, content_digest(text), m, args.max_length, spectrum.girth, spectrum.counts)
    _emit(report, args.format, out)
    _timings({"parse": parse_time, "oracle": time.perf_counter() - t0}, err)
    return EXIT_OK


COMMANDS = {"count": _cmd_count, "girth": _cmd_girth, "chains": _cmd_chains, "oracle": _cmd_oracle}


def run_cli(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out, err)
    except (InputError, FormatError, ModelError, ChainError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ExpansionBudgetExceeded as exc:
        err.write(f"error: oracle refused the input: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
