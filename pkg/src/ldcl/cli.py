"""Command line entry point: ``ldcl compress|decompress|inspect|metrics|bench``.

Exit codes: 0 success, 1 usage, 2 I/O, 3 archive format or corruption.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import BenchSpec, parse_precision, run_bench, write_csv
from .container import from_bytes, to_bytes
from .errors import FormatError
from .matrix import CodecParams, compress, decompress
from .metrics import format_ratio, measure
from .sequence import BitSequence

log = logging.getLogger("ldcl")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _write(path, data: bytes) -> None:
    Path(path).write_bytes(data)


def _params(args) -> CodecParams:
    try:
        return CodecParams(args.set_size, args.precision, "log" if args.m_log else "raw")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def run_compress(args) -> int:
    params = _params(args)
    data = _read(args.input)
    archive = compress(data, params, workers=args.jobs)
    blob = to_bytes(archive)
    _write(args.output, blob)
    if data:
        cr = format_ratio(len(data), len(blob))
    else:
        log.warning("empty input: compression ratio is undefined, reporting 0.00")
        cr = "0.00"
    print(f"original_bytes={len(data)} compressed_bytes={len(blob)} cr={cr} "
          f"sets={archive.set_count}")
    return EXIT_OK


def run_decompress(args) -> int:
    archive = from_bytes(_read(args.archive))
    bits = decompress(archive, workers=args.jobs)
    _write(args.output, bits.data)
    return EXIT_OK


def _fraction_preview(rec) -> str:
    if rec.is_verbatim:
        return f"verbatim {rec.verbatim_digit}"
    frac = rec.residue_log.digits
    if len(frac) > 16:
        frac = f"{frac[:8]}...{frac[-8:]}"
    return f"log_r=0.{frac}"


def _multiplier_label(rec, log_m: bool) -> str:
    if rec.is_verbatim:
        return "-"
    if log_m:
        digits = rec.multiplier.digits
        if len(digits) > 16:
            digits = f"{digits[:8]}...{digits[-8:]}"
        return f"log(m)=0.{digits}"
    return f"m={rec.multiplier}"


def run_inspect(args) -> int:
    archive = from_bytes(_read(args.archive))
    p = archive.params
    flags = (1 if archive.odd_pad else 0) | (2 if p.log_m else 0)
    out = [
        f"set_size (T)        {p.set_size}",
        f"precision (p)       {p.precision}",
        f"m_profile           {p.m_profile}" + (" (multipliers log-encoded)" if p.log_m else ""),
        f"flags               0x{flags:02x} (bit0 odd_pad={int(archive.odd_pad)}, "
        f"bit1 m_log={int(p.log_m)})",
        f"original_bits       {archive.bit_length}",
        f"mapped_digits       {archive.mapped_length}",
        f"set_count (n)       {archive.set_count}",
        f"last_set_digits     {archive.last_set_digit_len}",
    ]
    records = archive.matrix.records
    if records:
        zero = sum(1 for r in records if r.r_is_zero)
        out.append(f"zero_residue_sets   {zero}")
        limit = args.sets if args.sets >= 0 else len(records)
        shown = list(enumerate(records))
        if len(records) > limit:
            shown = shown[: limit // 2 + limit % 2] + shown[len(records) - limit // 2:]
        prev = -1
        for i, rec in shown:
            if i != prev + 1:
                out.append(f"  ... {i - prev - 1} sets omitted ...")
            sentinel = " r=0" if rec.r_is_zero else ""
            out.append(f"  set {i}: len={rec.digit_len} {_multiplier_label(rec, p.log_m)}"
                       f"{sentinel} {_fraction_preview(rec)}")
            prev = i
    print("\n".join(out))
    return EXIT_OK


def run_metrics(args) -> int:
    data = _read(args.original)
    blob = _read(args.archive)
    archive = from_bytes(blob)
    try:
        report = measure(BitSequence.from_bytes(data), archive, len(blob), workers=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not data:
        log.warning("empty input: compression ratio is undefined, reporting 0.00")
    print(report.render_csv() if args.csv else report.render_text(), end="" if args.csv else "\n")
    return EXIT_OK


def run_bench_cmd(args) -> int:
    try:
        precisions = [parse_precision(tok) for tok in args.precision]
        spec = BenchSpec(
            set_sizes=args.set_size,
            precisions=precisions,
            input_path=args.input,
            random_bytes=args.random_bytes,
            seed=args.seed,
            trials=args.trials,
            m_profile="log" if args.m_log else "raw",
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if spec.input_path is not None and not Path(spec.input_path).is_file():
        raise OSError(f"cannot read {spec.input_path}")
    rows = run_bench(spec, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(rows, fh, spec)
    else:
        write_csv(rows, sys.stdout, spec)
    for row in rows:
        if row.error:
            log.warning("T=%d p=%d trial=%d failed: %s", row.T, row.p, row.trial, row.error)
    return EXIT_OK


def _add_codec_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--set-size", type=int, default=300, help="digits per set (default 300)")
    p.add_argument("--precision", type=int, default=12,
                   help="stored fraction digits per log value (default 12)")
    p.add_argument("--m-log", action="store_true", help="store multipliers as logarithms")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ldcl", description="Lossy data compression using logarithms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compress", help="compress a file into an .ldcl archive")
    p.add_argument("input")
    p.add_argument("output")
    _add_codec_options(p)
    p.add_argument("--jobs", type=int, default=None, help="worker processes for per-set work")
    p.set_defaults(func=run_compress)

    p = sub.add_parser("decompress", help="reconstruct a file from an archive")
    p.add_argument("archive")
    p.add_argument("output")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=run_decompress)

    p = sub.add_parser("inspect", help="dump archive header and set records")
    p.add_argument("archive")
    p.add_argument("--sets", type=int, default=10,
                   help="number of set records to list (-1 for all)")
    p.set_defaults(func=run_inspect)

    p = sub.add_parser("metrics", help="CR and per-set RMSE of an archive against its original")
    p.add_argument("original")
    p.add_argument("archive")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=run_metrics)

    p = sub.add_parser("bench", help="sweep set sizes and precisions, write CSV")
    p.add_argument("--set-size", type=int, nargs="+", default=[300])
    p.add_argument("--precision", nargs="+", default=["12"],
                   help="precisions; 'T+k' means set size plus k")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="benchmark this file instead of random data")
    src_default = 1 << 20
    src.add_argument("--random-bytes", type=int, default=src_default,
                     help=f"size of each seeded random input (default {src_default})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--m-log", action="store_true")
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.add_argument("--jobs", type=int, default=None, help="run grid cells in parallel")
    p.set_defaults(func=run_bench_cmd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ldcl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"ldcl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"ldcl: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
