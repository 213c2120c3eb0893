"""Benchmark sweeps and oracle verification over generated datasets, with CSV output."""

import csv
import json
import logging
import math
import os
import time
import typing as t

from maxrs.approx import approx_maxcrs
from maxrs.constants import (
    BENCH_BLOCK_RECORDS,
    BENCH_CARDINALITIES,
    BENCH_MEM_RECORDS,
    BENCH_SIZE_FRACTIONS,
    CSV_HEADER,
    DEFAULT_BLOCK_RECORDS,
    DEFAULT_MEM_RECORDS,
    DEFAULT_RANGE_FRACTION,
)
from maxrs.datasets import Distribution, GenSpec, WeightMode, generate
from maxrs.emstore import BlockStore, EMConfig
from maxrs.exact import maxrs
from maxrs.geometry import Point, range_sum
from maxrs.oracles import brute_maxcrs, brute_maxrs

try:
    import jsonschema

    HAS_JSON_SCHEMA = True
except ImportError:
    HAS_JSON_SCHEMA = False

logger = logging.getLogger(__name__)

# Largest instance the MaxCRS oracle is run on; larger ones are bounded by the best square.
ORACLE_MAX_OBJECTS = 400

AXES = ("n", "buffer", "block", "range", "diam")

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "extent": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "distribution": {"type": "string", "enum": [d.value for d in Distribution]},
        "weight_mode": {"type": "string", "enum": [w.value for w in WeightMode]},
        "seed": {"type": "integer", "minimum": 0},
        "B": {"type": "integer", "minimum": 1},
        "M": {"type": "integer", "minimum": 2},
        "m": {"type": ["integer", "null"], "minimum": 2},
        "d1": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "d2": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "diam": {"type": ["number", "null"], "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}


class BenchRow(t.NamedTuple):
    """One CSV row of benchmark output."""

    algorithm: str
    n: int
    B: int
    M: int
    range_or_diameter: float
    io_sort: int
    io_sweep: int
    io_total: int
    answer_value: float
    wall_ms: float


class BenchSettings(t.NamedTuple):
    """Dataset, memory model and query sizes of one benchmark point.

    Query sizes left as ``None`` default to ``extent / 250``; the extent defaults to ``4 * n``.
    """

    n: int = 1000
    extent: t.Optional[float] = None
    distribution: str = Distribution.UNIFORM.value
    weight_mode: str = WeightMode.UNIT.value
    seed: int = 0
    B: int = DEFAULT_BLOCK_RECORDS
    M: int = DEFAULT_MEM_RECORDS
    m: t.Optional[int] = None
    d1: t.Optional[float] = None
    d2: t.Optional[float] = None
    diam: t.Optional[float] = None

    @property
    def domain(self) -> float:
        """The dataset extent."""
        return self.extent if self.extent is not None else float(4 * max(self.n, 1))

    @property
    def sizes(self) -> t.Tuple[float, float, float]:
        """Rectangle width and height and disk diameter.

        Examples:
            >>> from maxrs.bench import BenchSettings
            >>> BenchSettings(n=1000).sizes
            (16.0, 16.0, 16.0)
        """
        default = self.domain * DEFAULT_RANGE_FRACTION
        d1 = self.d1 if self.d1 is not None else default
        d2 = self.d2 if self.d2 is not None else d1
        diam = self.diam if self.diam is not None else default
        return d1, d2, diam

    def gen_spec(self) -> GenSpec:
        """The dataset of this benchmark point."""
        return GenSpec(self.n, self.domain, Distribution(self.distribution), WeightMode(self.weight_mode), self.seed)

    def em_config(self) -> EMConfig:
        """The memory model of this benchmark point."""
        return EMConfig.create(self.B, self.M, self.m)


def _check_schema(data: t.Any, schema: t.Any) -> None:
    if HAS_JSON_SCHEMA:
        jsonschema.validate(data, schema)
    elif not isinstance(data, dict) or set(data) - set(BenchSettings._fields):
        raise ValueError(f"Benchmark settings {data} are not a mapping of known fields.")


def settings_from_dict(data: t.Dict[str, t.Any]) -> BenchSettings:
    """Validate a settings mapping against :data:`CONFIG_SCHEMA` and build the settings.

    Examples:
        >>> from maxrs.bench import settings_from_dict
        >>> settings_from_dict({"n": 10, "B": 4, "M": 16}).em_config()
        EMConfig(B=4, M=16, m=2)
    """
    _check_schema(data, CONFIG_SCHEMA)
    return BenchSettings(**data)


def _row(
    algorithm: str, settings: BenchSettings, size: float, io_sort: int, io_sweep: int, value: float, ms: float
) -> BenchRow:
    io_total = io_sort + io_sweep
    return BenchRow(algorithm, settings.n, settings.B, settings.M, size, io_sort, io_sweep, io_total, value, ms)


def run_maxrs(settings: BenchSettings) -> BenchRow:
    """Time one exact MaxRS query on a freshly generated dataset."""
    store = BlockStore(settings.em_config())
    objects = generate(settings.gen_spec(), store)
    d1, d2, _ = settings.sizes
    started = time.perf_counter()
    answer = maxrs(objects, d1, d2)
    elapsed = (time.perf_counter() - started) * 1000
    return _row("exact_maxrs", settings, d1, answer.io_sort.total, answer.io_sweep.total, answer.value, elapsed)


def run_maxcrs(settings: BenchSettings) -> t.List[BenchRow]:
    """Time one approximate MaxCRS query and report the optimum it is measured against.

    The second row holds the oracle optimum for small datasets and the best-square upper
    bound otherwise.
    """
    store = BlockStore(settings.em_config())
    objects = generate(settings.gen_spec(), store)
    _, _, diam = settings.sizes
    started = time.perf_counter()
    answer = approx_maxcrs(objects, diam)
    elapsed = (time.perf_counter() - started) * 1000
    rows = [_row("approx_maxcrs", settings, diam, answer.io_sort.total, answer.io_sweep.total, answer.value, elapsed)]
    if settings.n <= ORACLE_MAX_OBJECTS:
        started = time.perf_counter()
        optimum = brute_maxcrs(list(objects.scan()), diam).value
        rows.append(_row("brute_maxcrs", settings, diam, 0, 0, optimum, (time.perf_counter() - started) * 1000))
    else:
        rows.append(_row("mbr_bound", settings, diam, 0, 0, answer.mbr_value, 0.0))
    return rows


def load_settings(path: str) -> BenchSettings:
    """Read benchmark settings from a JSON object file, validated like :func:`settings_from_dict`.

    Raises:
        ValueError: When the file is not valid JSON or fails the settings schema.
    """
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} was not valid JSON: {exc}") from exc
    if HAS_JSON_SCHEMA:
        try:
            return settings_from_dict(data)
        except jsonschema.ValidationError as exc:
            raise ValueError(f"{path} failed the settings schema: {exc.message}") from exc
    return settings_from_dict(data)


def default_values(axis: str, base: BenchSettings) -> t.List[float]:
    """The desk-scale grid of an axis; range and diameter grids scale with the extent of ``base``.

    Examples:
        >>> from maxrs.bench import BenchSettings, default_values
        >>> default_values("block", BenchSettings())
        [8.0, 16.0, 32.0]
        >>> default_values("range", BenchSettings(extent=1000.0))
        [1.0, 2.0, 4.0, 10.0, 20.0]
    """
    if axis == "n":
        return [float(n) for n in BENCH_CARDINALITIES]
    if axis == "buffer":
        return [float(M) for M in BENCH_MEM_RECORDS]
    if axis == "block":
        return [float(B) for B in BENCH_BLOCK_RECORDS]
    if axis in ("range", "diam"):
        return [base.domain * fraction for fraction in BENCH_SIZE_FRACTIONS]
    raise ValueError(f"Axis {axis} was not one of {', '.join(AXES)}.")


def bench_axis(axis: str, values: t.Optional[t.Sequence[float]], base: BenchSettings) -> t.List[BenchRow]:
    """Sweep one parameter over ``values``, keeping the rest of ``base``.

    Args:
        axis: ``n`` (cardinality), ``buffer`` (memory records), ``block`` (block records),
            ``range`` (square side) or ``diam``.
        values: The parameter values, :func:`default_values` when None.
        base: The remaining settings.

    Returns:
        The rows in sweep order.

    Raises:
        ValueError: On an unknown axis.
    """
    if axis not in AXES:
        raise ValueError(f"Axis {axis} was not one of {', '.join(AXES)}.")
    if values is None:
        values = default_values(axis, base)
    rows: t.List[BenchRow] = []
    for value in values:
        if axis == "n":
            rows.append(run_maxrs(base._replace(n=int(value))))
        elif axis == "buffer":
            rows.append(run_maxrs(base._replace(M=int(value))))
        elif axis == "block":
            rows.append(run_maxrs(base._replace(B=int(value))))
        elif axis == "range":
            rows.append(run_maxrs(base._replace(d1=float(value), d2=float(value))))
        else:
            rows.extend(run_maxcrs(base._replace(diam=float(value))))
        logger.info("Benchmarked %s=%s: %s", axis, value, rows[-1])
    return rows


def write_rows(rows: t.Iterable[BenchRow], path: str) -> None:
    """Append rows to a CSV file, writing the header when the file is new or empty."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        if fresh:
            writer.writerow(CSV_HEADER)
        writer.writerows(rows)


def read_rows(path: str) -> t.List[BenchRow]:
    """Parse a CSV file written by :func:`write_rows`."""
    casts: t.List[t.Callable[[str], t.Any]] = [str, int, int, int, float, int, int, int, float, float]
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        return [BenchRow(*(cast(record[name]) for cast, name in zip(casts, CSV_HEADER))) for record in reader]


def location(point: Point) -> str:
    """Format a point for reports.

    Examples:
        >>> from maxrs.bench import location
        >>> from maxrs.geometry import Point
        >>> location(Point(1.0, 2.5))
        '(1.0, 2.5)'
    """
    return f"({point.x}, {point.y})"


class VerifyReport(t.NamedTuple):
    """Outcome of checking the solvers against the oracles on one instance."""

    ok: bool
    lines: t.List[str]


def verify(settings: BenchSettings) -> VerifyReport:
    """Run both solvers on a generated instance and compare them with the brute-force oracles.

    Checks that the exact MaxRS value matches the oracle and is attained at the returned point,
    and that the MaxCRS answer covers at least a quarter of the oracle optimum.
    """
    store = BlockStore(settings.em_config())
    objects = generate(settings.gen_spec(), store)
    records = list(objects.scan())
    d1, d2, diam = settings.sizes
    lines: t.List[str] = []
    ok = True

    exact = maxrs(objects, d1, d2)
    oracle = brute_maxrs(records, d1, d2)
    attained = range_sum(records, exact.point, d1, d2)
    lines.append(f"maxrs: value={exact.value} at {location(exact.point)} io={exact.io_total}")
    lines.append(f"oracle maxrs: value={oracle.value} at {location(oracle.point)}")
    matches = math.isclose(exact.value, oracle.value, abs_tol=1e-9)
    if not matches or not math.isclose(attained, exact.value, abs_tol=1e-9):
        ok = False
        lines.append(f"- maxrs value {exact.value}, attained {attained}\n+ oracle value {oracle.value}")

    approx = approx_maxcrs(objects, diam)
    optimum = brute_maxcrs(records, diam)
    lines.append(f"maxcrs: value={approx.value} at {location(approx.point)}")
    lines.append(f"oracle maxcrs: value={optimum.value} at {location(optimum.point)}")
    if approx.value < 0.25 * optimum.value - 1e-12:
        ok = False
        lines.append(f"- maxcrs value {approx.value}\n+ at least {0.25 * optimum.value} (quarter of {optimum.value})")
    lines.append("OK" if ok else "MISMATCH")
    return VerifyReport(ok, lines)

