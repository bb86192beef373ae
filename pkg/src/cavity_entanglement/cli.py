"""Command-line entry point: ``cavity-sweep`` / ``python -m cavity_entanglement``.

Exit codes: 0 success, 1 configuration error, 2 at least one non-converged
row, 3 I/O error.
"""

import argparse
import logging
import sys

from .sweep import ConfigError, _convert, build_config, emit_csv, read_config_text, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_IO = 0, 1, 2, 3

_FLAGS = {"v": "velocity v (0 < v < 1)",
          "Delta": "detector gap",
          "L": "cavity length",
          "eps": "coupling amplitude",
          "accel": "acceleration grid, start:stop:step or comma list",
          "mass": "bare-mass grid, start:stop:step or comma list",
          "trunc_tol": "truncation tolerance",
          "quad_tol": "quadrature tolerance",
          "threads": "worker processes (0 = one per CPU)",
          "output": "CSV path ('-' for stdout)"}


def build_parser():
    p = argparse.ArgumentParser(
        prog="cavity-sweep",
        description="Sweep cavity-cavity entanglement over acceleration and bare mass; "
                    "writes one CSV row per grid point.")
    p.add_argument("-c", "--config", help="key = value configuration file")
    for key, text in _FLAGS.items():
        p.add_argument(f"--{key}", dest=key, metavar="VALUE", help=text)
    p.add_argument("--record-timing", action="store_true",
                   help="write measured wall_time_ms even with a single worker")
    p.add_argument("--max-N", type=int, default=None, metavar="N",
                   help="truncation cap (default 30)")
    p.add_argument("--log-level", default="WARNING",
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return p


def load_config(args):
    entries = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {args.config!r}: "
                              f"{exc.strerror or exc}") from exc
        entries.update(read_config_text(text, args.config))
    for key in _FLAGS:
        value = getattr(args, key)
        if value is not None:
            origin = f"--{key}"
            entries[key] = (_convert(key, value, origin), origin)
    extra = {"record_timing": args.record_timing}
    if args.max_N is not None:
        if args.max_N < 1:
            raise ConfigError(f"--max-N: must be >= 1, got {args.max_N}")
        extra["max_N"] = args.max_N
    return build_config(entries, **extra)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(message)s",
                        stream=sys.stderr)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rows = list(run_sweep(cfg))
    try:
        emit_csv(rows, cfg.output_path)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    bad = [r for r in rows if not r.converged]
    for r in bad:
        print(f"not converged: a={r.a!r} kappa={r.kappa!r}: {r.error}", file=sys.stderr)
    return EXIT_NOT_CONVERGED if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
