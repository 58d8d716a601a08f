"""Argument parsing and the command-line entry point."""
import argparse
import sys
from typing import List, Optional, Tuple

from pydantic import ValidationError

from services.cli.bench import BenchOp
from services.cli.commands import EXIT_INVALID, CommandSpec, Verb, run
from services.tt_format.orthogonal import OrthMode
from shared.config.loader import get_logging_config
from shared.utils.logger import setup_logging


def int_list(text: str) -> Tuple[int, ...]:
    """Parse ``"2,3,4"`` into a tuple of integers."""
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _options_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="Output file")
    common.add_argument("--eps", type=float, default=0.0, dest="epsilon",
                        help="Relative Frobenius truncation tolerance")
    common.add_argument("--max-ranks", type=int_list, help="Bond rank caps R1,R2,...")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--site", type=int, help="1-based site")
    common.add_argument("--mem-cap", type=int, help="Dense allocation cap in bytes")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-format", choices=["text", "json"])
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _options_parser()
    parser = argparse.ArgumentParser(prog="ttalg", description="Tensor-train algebra toolkit")
    verbs = parser.add_subparsers(dest="verb", required=True)

    random_cmd = verbs.add_parser("random", parents=[common], help="Random .dnst, .ttv or .ttm")
    random_cmd.add_argument("--dims", type=int_list, required=True, help="Mode (row) sizes")
    random_cmd.add_argument("--cols", type=int_list, help="Column sizes for .ttm")
    random_cmd.add_argument("--ranks", type=int_list, help="Bond ranks")

    verbs.add_parser("decompose", parents=[common], help="TT-SVD of a dense tensor").add_argument("inputs", nargs=1)
    verbs.add_parser("round", parents=[common], help="Recompress a tensor train").add_argument("inputs", nargs=1)

    orth = verbs.add_parser("orthogonalize", parents=[common], help="Canonicalize around a site")
    orth.add_argument("inputs", nargs=1)
    orth.add_argument("--mode", choices=[m.value for m in OrthMode], default=OrthMode.MIXED.value)

    verbs.add_parser("info", parents=[common], help="Describe a tensor file").add_argument("inputs", nargs=1)
    verbs.add_parser("densify", parents=[common], help="Expand to a dense tensor").add_argument("inputs", nargs=1)
    for name, text in (("add", "Sum"), ("hadamard", "Entrywise product"), ("dot", "Inner product"),
                       ("matvec", "Operator applied to a train"), ("quadform", "x^T A x")):
        verbs.add_parser(name, parents=[common], help=text).add_argument("inputs", nargs=2)

    bench = verbs.add_parser("bench", parents=[common], help="Scaling benchmark (CSV on stdout)")
    bench.add_argument("bench_op", choices=[op.value for op in BenchOp])
    bench.add_argument("--orders", type=int_list)
    bench.add_argument("--mode-size", type=int)
    bench.add_argument("--rank", type=int)
    bench.add_argument("--repeats", type=int)
    return parser


def to_spec(args: argparse.Namespace) -> CommandSpec:
    fields = {
        key: value for key, value in vars(args).items()
        if value is not None and key not in ("log_level", "log_format")
    }
    return CommandSpec(**fields)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run one verb and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    log_settings = get_logging_config()
    setup_logging(
        "ttalg",
        log_level=args.log_level or log_settings.level,
        log_format=args.log_format or log_settings.format,
        log_file=log_settings.file,
    )

    try:
        spec = to_spec(args)
    except ValidationError as e:
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"]) or args.verb
            sys.stderr.write(f"error: {location}: {error['msg']}\n")
        return EXIT_INVALID

    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
