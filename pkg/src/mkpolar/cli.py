"""Command-line driver: ``mkpolar {construct,simulate,roundtrip,complexity,enumerate}``.

Exit codes: 0 success, 1 validation error, 2 self-test failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager

from . import complexity
from .channel import make_punctured, make_shortened
from .construction import (
    DEFAULT_DESIGN_SNR_DB,
    DEFAULT_FRAMES,
    CodeSpec,
    construct,
    search_kernel_orders,
)
from .kernels import KernelSeq, enumerate_block_lengths, factorize
from .llr import REAL, QuantConfig
from .sim import (
    DEFAULT_MAX_FRAME_ERRORS,
    DEFAULT_MAX_FRAMES,
    roundtrip,
    simulate,
    write_frames_csv,
    write_summary_csv,
)

log = logging.getLogger("mkpolar")

EXIT_OK, EXIT_INVALID, EXIT_SELFTEST = 0, 1, 2


class UsageError(Exception):
    pass


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _float_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _resolve_seq(n, kernels):
    if kernels is not None:
        seq = KernelSeq.parse(kernels)
        if n is not None and seq.n_bits != n:
            raise UsageError(f"kernel order {seq} gives N={seq.n_bits}, not {n}")
        return seq
    if n is None:
        raise UsageError("need --n or --kernels")
    nb, m = factorize(n)
    return KernelSeq((3,) * m + (2,) * nb)


def _load_spec(path):
    try:
        with open(path) as fh:
            return CodeSpec.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")


def cmd_construct(args):
    if args.n is not None:
        factorize(args.n)
    if args.kernels is None:
        if args.n is None:
            raise UsageError("need --n or --kernels")
        ranked = search_kernel_orders(
            args.n, args.k, args.design_snr, frames=args.search_frames, seed=args.seed
        )
        seq = ranked[0][0]
        for s, fer in ranked:
            log.info("kernel order %s: FER %.3e", s, fer)
        print(f"chosen kernel order: {seq}", file=sys.stderr)
    else:
        seq = _resolve_seq(args.n, args.kernels)
    if args.k is None or not 0 < args.k < seq.n_bits:
        raise UsageError(f"--k must satisfy 0 < k < {seq.n_bits}")
    spec = construct(seq, args.k, args.design_snr, frames=args.frames, seed=args.seed)
    with _output(args.out) as fh:
        fh.write(spec.to_json())
    return EXIT_OK


def _model(args):
    arith = args.arithmetic
    if arith is None:
        arith = "quantized" if (args.q is not None or args.scale is not None) else "real"
    if arith == "real":
        return REAL
    return QuantConfig(args.q if args.q is not None else 5,
                       args.scale if args.scale is not None else 1.0)


def cmd_simulate(args):
    spec = _load_spec(args.spec)
    model = _model(args)
    rate_match = None
    if args.baseline != "none":
        make = make_punctured if args.baseline == "puncture" else make_shortened
        spec, rate_match = make(
            spec.n_bits, spec.k_bits, design_snr_db=spec.design_snr_db,
            frames=args.construct_frames, seed=args.seed,
        )
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    frame_log = [] if args.frames_out else None
    rows = simulate(
        spec, args.ebn0, max_frames=args.frames,
        max_frame_errors=args.frame_errors if args.frame_errors > 0 else None,
        seed=args.seed, model=model, rate_match=rate_match,
        workers=args.workers, frame_log=frame_log,
    )
    for r in rows:
        log.info("Eb/N0 %g dB: %d frames, FER %.3e, %.2f s", r.ebn0_db, r.frames, r.fer,
                 r.wall_seconds)
    with _output(args.out) as fh:
        write_summary_csv(rows, fh, timing=args.timing)
    if frame_log is not None:
        with _output(args.frames_out) as fh:
            write_frames_csv(frame_log, fh)
    return EXIT_OK


def cmd_roundtrip(args):
    if args.spec is not None:
        spec = _load_spec(args.spec)
    else:
        seq = _resolve_seq(args.n, args.kernels)
        spec = CodeSpec.all_info(seq)
    ok, checked, bad = roundtrip(spec, samples=args.samples, seed=args.seed)
    if not ok:
        print(f"FAIL N={spec.n_bits} kernels={spec.seq}: u={''.join(map(str, bad))}")
        return EXIT_SELFTEST
    print(f"PASS N={spec.n_bits} K={spec.k_bits} kernels={spec.seq}: {checked} frames")
    return EXIT_OK


COMPLEXITY_FIELDS = ["n", "stages", "mk_metric", "mother_metric", "gain_pct",
                     "comparators", "adders", "register_bits"]


def _complexity_row(seq, q):
    r = complexity.gate_counts(seq, q_bits=q)
    return [r.n_bits, r.stages, r.llr_metric_mk, r.llr_metric_mother, f"{r.gain_percent:.1f}",
            r.comparators_f + r.comparators_dec, r.adders_subtractors, r.register_bits]


def cmd_complexity(args):
    rows = []
    if args.n is not None or args.kernels is not None:
        rows.append(_complexity_row(_resolve_seq(args.n, args.kernels), args.q))
    else:
        for n, _, _ in complexity.gain_table(args.max_terms):
            rows.append(_complexity_row(_resolve_seq(n, None), args.q))
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPLEXITY_FIELDS)
        w.writerows(rows)
    return EXIT_OK


def cmd_enumerate(args):
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["M", "N"])
        w.writerows(enumerate_block_lengths(args.max_terms, not args.no_pure_ternary))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for self-test failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="mkpolar", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a code spec (frozen set)")
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--kernels", help="kernel order, outermost first, e.g. 3,2,2,2,2")
    c.add_argument("--design-snr", type=float, default=DEFAULT_DESIGN_SNR_DB)
    c.add_argument("--frames", type=int, default=DEFAULT_FRAMES)
    c.add_argument("--search-frames", type=int, default=10_000,
                   help="frames per ordering when --kernels is omitted")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("simulate", help="FER/BER sweep over Eb/N0")
    s.add_argument("spec", help="code spec JSON written by 'construct'")
    s.add_argument("--ebn0", type=_float_list, required=True)
    s.add_argument("--frames", type=int, default=DEFAULT_MAX_FRAMES)
    s.add_argument("--frame-errors", type=int, default=DEFAULT_MAX_FRAME_ERRORS,
                   help="stop a point after this many frame errors (0 disables)")
    s.add_argument("--arithmetic", choices=["real", "quantized"])
    s.add_argument("--q", type=int)
    s.add_argument("--scale", type=float)
    s.add_argument("--baseline", choices=["none", "puncture", "shorten"], default="none")
    s.add_argument("--construct-frames", type=int, default=DEFAULT_FRAMES,
                   help="construction frames for a rate-matched baseline")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="add a wall_seconds column")
    s.add_argument("--frames-out", help="per-frame CSV")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("roundtrip", help="noiseless encode/decode self-test")
    r.add_argument("spec", nargs="?")
    r.add_argument("--n", type=int)
    r.add_argument("--kernels")
    r.add_argument("--samples", type=int, default=10_000)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_roundtrip)

    x = sub.add_parser("complexity", help="LLR metric, gate counts, register bits")
    x.add_argument("--max-terms", type=int, default=10)
    x.add_argument("--n", type=int)
    x.add_argument("--kernels")
    x.add_argument("--q", type=int, default=5)
    x.add_argument("--out")
    x.set_defaults(func=cmd_complexity)

    e = sub.add_parser("enumerate", help="attainable block lengths per kernel count")
    e.add_argument("--max-terms", type=int, default=10)
    e.add_argument("--no-pure-ternary", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
