"""
TreeCode Hub - Command Line Interface
Thin adapters from text, CSV and packet files to the library calls
"""

import argparse
import logging
import os
import random
import sys
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .analysis import (MAX_BENCHMARK_N, adjacency_list_bits, ambiguity_report, run_benchmark,
                       write_benchmark_csv)
from .codec import code_lengths, decode, encode
from .config_manager import DEFAULT_CONFIG_FILE, ConfigManager
from .errors import ConfigError, TreeCodeError, UsageError
from .newick import emit_newick, newick_bit_length, parse_newick
from .routing import (decode_packet, encode_packet, read_route_list, table_from_paths,
                      tree_to_table, write_route_list)
from .tree import (ENUMERATION_LIMIT, Tree, enumerate_trees, read_parent_array, sample_uniform,
                   stats, write_parent_array)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

METHODS = ("pc", "td", "te")
FORMATS = ("newick", "parent")


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(message)


def _read_tree(text: str, fmt: str) -> Tree:
    if fmt == "auto":
        fmt = "newick" if ";" in text or "(" in text else "parent"
    if fmt == "newick":
        return parse_newick(text)[0]
    return read_parent_array(text)


def _write_tree(tree: Tree, fmt: str) -> str:
    if fmt == "parent":
        return write_parent_array(tree)
    return emit_newick(tree) + "\n"


def _read_input(path: Optional[str], stdin: TextIO) -> str:
    if path is None or path == "-":
        return stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _require_positive(value: int, flag: str):
    if value < 1:
        raise UsageError(f"{flag} must be at least 1, got {value}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="treecode", description="Succinct codes for unlabeled rooted trees")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None,
                        help=f"JSON settings file (default: {DEFAULT_CONFIG_FILE} if present)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    parser.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    p = commands.add_parser("encode", help="tree text to a '0'/'1' codeword")
    p.add_argument("--method", choices=METHODS, default="te")
    p.add_argument("--format", choices=("auto",) + FORMATS, default="auto")
    p.add_argument("--input", help="file to read (default: stdin)")

    p = commands.add_parser("decode", help="'0'/'1' codeword to tree text")
    p.add_argument("--method", choices=METHODS, default="te")
    p.add_argument("--n", type=int, required=True, help="node count")
    p.add_argument("--format", choices=FORMATS, default="newick")
    p.add_argument("--input")

    p = commands.add_parser("stats", help="node, leaf and code-length figures for a tree")
    p.add_argument("--format", choices=("auto",) + FORMATS, default="auto")
    p.add_argument("--input")

    p = commands.add_parser("sample", help="uniformly random trees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=FORMATS, default="newick")

    p = commands.add_parser("enumerate", help="every tree with n nodes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=FORMATS, default="newick")

    p = commands.add_parser("bench", help="benchmark CSV of average code lengths")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", help="CSV file (default: stdout)")

    p = commands.add_parser("packet-encode", help="route list to a binary packet")
    p.add_argument("--input", help="route-list file (default: stdin)")
    p.add_argument("--output", required=True, help="packet file")
    p.add_argument("--structure-only", action="store_true", help="omit node labels")

    p = commands.add_parser("packet-decode", help="binary packet to a route list")
    p.add_argument("--input", required=True, help="packet file")
    p.add_argument("--output", help="route-list file (default: stdout)")

    p = commands.add_parser("convert", help="translate between Newick and parent-array text")
    p.add_argument("--to", choices=FORMATS, required=True)
    p.add_argument("--input")

    p = commands.add_parser("audit", help="count trees that share a codeword")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="te")
    return parser


def _configure_logging(args, config: ConfigManager):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    else:
        level = getattr(logging, str(config.get("output", "log_level", "WARNING")).upper(),
                        logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("core").setLevel(level)


def _load_config(path: Optional[str]) -> ConfigManager:
    if path is None:
        return ConfigManager(DEFAULT_CONFIG_FILE, create=False)
    if not os.path.exists(path):
        raise ConfigError(f"configuration file {path} not found")
    return ConfigManager(path, create=False)


# Commands

def _cmd_encode(args, config, stdin, stdout):
    tree = _read_tree(_read_input(args.input, stdin), args.format)
    stdout.write(encode(tree, args.method).to01() + "\n")


def _cmd_decode(args, config, stdin, stdout):
    _require_positive(args.n, "--n")
    text = _read_input(args.input, stdin).strip()
    limit = config.get("codec", "decode_search_limit")
    tree = decode(text, args.n, args.method, limit)
    stdout.write(_write_tree(tree, args.format))


def _cmd_stats(args, config, stdin, stdout):
    tree = _read_tree(_read_input(args.input, stdin), args.format)
    tree_stats = stats(tree)
    lengths = code_lengths(tree_stats)
    rows = [
        ("n", tree_stats.n),
        ("l", tree_stats.l),
        ("depth", tree_stats.depth),
        ("pc_bits", lengths.pc),
        ("td_bits", lengths.td),
        ("te_bits", lengths.te),
        ("adjacency_bits", adjacency_list_bits(tree_stats.n)),
        ("newick_bits", newick_bit_length(tree_stats)),
    ]
    for name, value in rows:
        stdout.write(f"{name}: {value}\n")


def _cmd_sample(args, config, stdin, stdout):
    _require_positive(args.n, "--n")
    _require_positive(args.count, "--count")
    seed = args.seed if args.seed is not None else config.get("benchmark", "seed")
    rng = random.Random(seed)
    for _ in range(args.count):
        stdout.write(_write_tree(sample_uniform(args.n, rng), args.format))


def _cmd_enumerate(args, config, stdin, stdout):
    if not 1 <= args.n <= ENUMERATION_LIMIT:
        raise UsageError(f"--n must be between 1 and {ENUMERATION_LIMIT}, got {args.n}")
    for tree in enumerate_trees(args.n):
        stdout.write(_write_tree(tree, args.format))


def _cmd_bench(args, config, stdin, stdout):
    settings = config.section("benchmark")
    n_min = args.n_min if args.n_min is not None else settings["n_min"]
    n_max = args.n_max if args.n_max is not None else settings["n_max"]
    samples = args.samples if args.samples is not None else settings["samples_per_n"]
    seed = args.seed if args.seed is not None else settings["seed"]
    workers = args.workers if args.workers is not None else settings["workers"]
    _require_positive(samples, "--samples")
    _require_positive(workers, "--workers")
    if not 1 <= n_min <= n_max:
        raise UsageError(f"--n-min/--n-max must satisfy 1 <= n_min <= n_max, got {n_min}..{n_max}")
    if n_max > MAX_BENCHMARK_N:
        raise UsageError(f"--n-max must be at most {MAX_BENCHMARK_N}, got {n_max}")

    rows = run_benchmark(n_min, n_max, samples, seed,
                         exhaustive_threshold=settings["exhaustive_threshold"], workers=workers)
    precision = config.get("output", "float_precision", 4)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            write_benchmark_csv(rows, f, precision)
    else:
        write_benchmark_csv(rows, stdout, precision)


def _cmd_packet_encode(args, config, stdin, stdout):
    table = read_route_list(_read_input(args.input, stdin))
    packet = encode_packet(table_from_paths(table), include_labels=not args.structure_only)
    with open(args.output, "wb") as f:
        f.write(packet)
    logger.info("wrote %d-byte packet to %s", len(packet), args.output)


def _cmd_packet_decode(args, config, stdin, stdout):
    with open(args.input, "rb") as f:
        data = f.read()
    decoded, has_labels = decode_packet(data, config.get("codec", "decode_search_limit"))
    text = write_route_list(tree_to_table(decoded)) if has_labels else emit_newick(decoded) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        stdout.write(text)


def _cmd_convert(args, config, stdin, stdout):
    text = _read_input(args.input, stdin)
    if args.to == "parent":
        tree, _ = parse_newick(text)
        stdout.write(write_parent_array(tree))
    else:
        stdout.write(emit_newick(read_parent_array(text)) + "\n")


def _cmd_audit(args, config, stdin, stdout):
    report = ambiguity_report(args.n, args.method)
    stdout.write(f"n: {report.n}\n")
    stdout.write(f"method: {report.method}\n")
    stdout.write(f"trees: {report.trees}\n")
    stdout.write(f"codewords: {report.codewords}\n")
    stdout.write(f"shared_trees: {report.shared_trees}\n")
    stdout.write(f"largest_class: {report.largest_class}\n")


COMMANDS = {
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "stats": _cmd_stats,
    "sample": _cmd_sample,
    "enumerate": _cmd_enumerate,
    "bench": _cmd_bench,
    "packet-encode": _cmd_packet_encode,
    "packet-decode": _cmd_packet_decode,
    "convert": _cmd_convert,
    "audit": _cmd_audit,
}


def run(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None,
        stdout: Optional[TextIO] = None) -> int:
    """Run one command and return the process exit status"""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)

    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    try:
        config = _load_config(args.config)
        _configure_logging(args, config)
        COMMANDS[args.command](args, config, stdin, stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TreeCodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run())
