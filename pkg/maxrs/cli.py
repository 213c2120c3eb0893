"""Command-line front end: ``maxrs gen|maxrs|maxcrs|oracle|verify|bench``."""

import argparse
import logging
import sys
import typing as t

from maxrs.approx import approx_maxcrs
from maxrs.bench import AXES, BenchSettings, bench_axis, load_settings, location, verify, write_rows
from maxrs.constants import CSV_HEADER, DEFAULT_BLOCK_RECORDS, DEFAULT_MEM_RECORDS
from maxrs.datasets import (
    Distribution,
    GenSpec,
    WeightMode,
    generate,
    load_objects,
    load_text_points,
    save_generated,
    save_text_points,
)
from maxrs.emstore import BlockFile, BlockStore, EMConfig, IOStats
from maxrs.exact import maxrs
from maxrs.geometry import WeightedObject
from maxrs.oracles import brute_maxcrs, brute_maxrs

logger = logging.getLogger(__name__)


def _values(text: str) -> t.List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def _dataset_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("dataset")
    group.add_argument("--n", type=int, default=1000, help="number of generated objects")
    group.add_argument("--extent", type=float, default=None, help="domain side, 4*n when omitted")
    group.add_argument("--dist", choices=[d.value for d in Distribution], default=Distribution.UNIFORM.value)
    group.add_argument("--weights", choices=[w.value for w in WeightMode], default=WeightMode.UNIT.value)
    group.add_argument("--seed", type=int, default=0)


def _memory_flags(parser: argparse.ArgumentParser, with_directory: bool = False) -> None:
    group = parser.add_argument_group("memory model")
    group.add_argument("--block-records", type=int, default=DEFAULT_BLOCK_RECORDS, help="records per block (B)")
    group.add_argument("--mem-records", type=int, default=DEFAULT_MEM_RECORDS, help="records of memory (M)")
    group.add_argument("--fanout", type=int, default=None, help="fan-out m, max(2, M/B - 2) when omitted")
    if with_directory:
        group.add_argument("--data-dir", default=None, help="keep block files in this directory instead of memory")


def _input_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("input, a generated dataset when neither is given")
    group.add_argument("--in", dest="input", default=None, help="binary object file")
    group.add_argument("--text", default=None, help="text point file of 'x y [w]' lines")
    group.add_argument("--normalize", action="store_true", help="rescale text points onto [0, 1000000]^2")


def _size_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("query sizes, extent/250 when omitted")
    group.add_argument("--d1", type=float, default=None, help="rectangle width")
    group.add_argument("--d2", type=float, default=None, help="rectangle height, d1 when omitted")
    group.add_argument("--diam", type=float, default=None, help="disk diameter")


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``maxrs`` command."""
    parser = argparse.ArgumentParser(prog="maxrs", description="Maximizing range sum queries in external memory.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log INFO, or DEBUG when repeated")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="write a synthetic dataset")
    _dataset_flags(gen)
    gen.add_argument("--out", required=True, help="destination file")
    gen.add_argument("--as-text", action="store_true", help="write 'x y w' lines instead of the binary format")

    for name, text in (
        ("maxrs", "exact MaxRS query"),
        ("maxcrs", "approximate MaxCRS query"),
        ("oracle", "brute-force MaxRS and MaxCRS"),
    ):
        sub = commands.add_parser(name, help=text)
        _dataset_flags(sub)
        _input_flags(sub)
        _memory_flags(sub, with_directory=True)
        _size_flags(sub)
        if name == "maxcrs":
            sub.add_argument("--sigma", type=float, default=None, help="shifting distance, sqrt(2)/4*diam when omitted")

    check = commands.add_parser("verify", help="compare both solvers with the oracles on a generated instance")
    _dataset_flags(check)
    _memory_flags(check)
    _size_flags(check)
    check.add_argument("--config", default=None, help="JSON settings file replacing the other flags")

    bench = commands.add_parser("bench", help="sweep one parameter and write CSV rows")
    _dataset_flags(bench)
    _memory_flags(bench)
    _size_flags(bench)
    bench.add_argument("--config", default=None, help="JSON settings file replacing the other flags")
    bench.add_argument("--axis", choices=AXES, required=True)
    bench.add_argument("--values", type=_values, default=None, help="comma separated values, a preset grid if omitted")
    bench.add_argument("--csv", default=None, help="append rows to this CSV file instead of stdout")
    return parser


def _settings(args: argparse.Namespace) -> BenchSettings:
    if getattr(args, "config", None):
        return load_settings(args.config)
    return BenchSettings(
        n=args.n,
        extent=args.extent,
        distribution=args.dist,
        weight_mode=args.weights,
        seed=args.seed,
        B=args.block_records,
        M=args.mem_records,
        m=args.fanout,
        d1=args.d1,
        d2=args.d2,
        diam=args.diam,
    )


def _objects(args: argparse.Namespace, store: BlockStore) -> BlockFile[WeightedObject]:
    if args.input:
        return load_objects(args.input, store)
    if args.text:
        return load_text_points(args.text, store, rescale=args.normalize)
    return generate(_settings(args).gen_spec(), store)


def _sizes(args: argparse.Namespace, objects: BlockFile[WeightedObject]) -> t.Tuple[float, float, float]:
    settings = _settings(args)
    if args.input or args.text:
        extent = max((max(abs(o.x), abs(o.y)) for o in objects.scan()), default=1.0) or 1.0
        settings = settings._replace(extent=extent)
    return settings.sizes


def _io(label: str, stats: IOStats) -> str:
    return f"{label}: {stats.total} ({stats.blocks_read} read, {stats.blocks_written} written)"


def cmd_gen(args: argparse.Namespace) -> int:
    """Write a synthetic dataset."""
    extent = BenchSettings(n=args.n, extent=args.extent).domain
    spec = GenSpec(args.n, extent, Distribution(args.dist), WeightMode(args.weights), args.seed)
    if args.as_text:
        objects = generate(spec, BlockStore(EMConfig.create(DEFAULT_BLOCK_RECORDS, DEFAULT_MEM_RECORDS)))
        count = save_text_points(objects.scan(), args.out)
    else:
        count = save_generated(spec, args.out)
    print(f"wrote {count} objects to {args.out}")
    return 0


def cmd_maxrs(args: argparse.Namespace, store: BlockStore) -> int:
    """Run an exact MaxRS query and print the answer with its I/O."""
    objects = _objects(args, store)
    d1, d2, _ = _sizes(args, objects)
    answer = maxrs(objects, d1, d2)
    region = answer.region
    print(f"point: {location(answer.point)}")
    print(f"value: {answer.value}")
    print(f"region: ({region.x1}, {region.x2}) x ({region.y1}, {region.y2})")
    print(_io("io_sort", answer.io_sort))
    print(_io("io_sweep", answer.io_sweep))
    print(f"io_total: {answer.io_total}")
    print(f"high_water: {store.tracker.high_water_records} records, {store.tracker.high_water_buffers} buffers")
    objects.remove()
    return 0


def cmd_maxcrs(args: argparse.Namespace, store: BlockStore) -> int:
    """Run an approximate MaxCRS query and print the answer with the candidate audit."""
    objects = _objects(args, store)
    _, _, diam = _sizes(args, objects)
    answer = approx_maxcrs(objects, diam, args.sigma)
    print(f"point: {location(answer.point)}")
    print(f"value: {answer.value}")
    print(f"square_value: {answer.mbr_value}")
    for index, candidate in enumerate(answer.candidates):
        print(f"candidate p{index}: {location(candidate.point)} value {candidate.value}")
    print(_io("io_sort", answer.io_sort))
    print(_io("io_sweep", answer.io_sweep))
    print(f"io_total: {answer.io_total}")
    objects.remove()
    return 0


def cmd_oracle(args: argparse.Namespace, store: BlockStore) -> int:
    """Print the brute-force MaxRS and MaxCRS answers."""
    objects = _objects(args, store)
    d1, d2, diam = _sizes(args, objects)
    records = list(objects.scan())
    rect = brute_maxrs(records, d1, d2)
    disk = brute_maxcrs(records, diam)
    print(f"maxrs: value {rect.value} at {location(rect.point)}")
    print(f"maxcrs: value {disk.value} at {location(disk.point)}")
    objects.remove()
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    """Compare both solvers with the oracles; nonzero exit on a mismatch."""
    report = verify(_settings(args))
    for line in report.lines:
        print(line)
    return 0 if report.ok else 1


def cmd_bench(args: argparse.Namespace) -> int:
    """Sweep one axis and write the rows as CSV."""
    rows = bench_axis(args.axis, args.values, _settings(args))
    if args.csv:
        write_rows(rows, args.csv)
        print(f"appended {len(rows)} rows to {args.csv}")
    else:
        print(",".join(CSV_HEADER))
        for row in rows:
            print(",".join(str(value) for value in row))
    return 0


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    """Entry point of the ``maxrs`` command; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
        )
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bench":
            return cmd_bench(args)
        config = EMConfig.create(args.block_records, args.mem_records, args.fanout)
        commands = {"maxrs": cmd_maxrs, "maxcrs": cmd_maxcrs, "oracle": cmd_oracle}
        return commands[args.command](args, BlockStore(config, args.data_dir))
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
