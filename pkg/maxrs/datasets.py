"""Synthetic object generators and readers/writers for object files and text point files."""

import enum
import logging
import struct
import typing as t

import numpy as np

from maxrs.constants import (
    DEFAULT_GENERATOR,
    FILE_MAGIC,
    FILE_VERSION,
    GAUSSIAN_SPREAD,
    GENERATOR_IDS,
    HEADER_FORMAT,
    NORMALIZED_EXTENT,
    OBJECT_FORMAT,
    RANDOM_WEIGHT_RANGE,
)
from maxrs.emstore import BlockFile, BlockStore, RecordCodec
from maxrs.geometry import WeightedObject, check_object

logger = logging.getLogger(__name__)

OBJECT_CODEC: RecordCodec[WeightedObject] = RecordCodec("object", OBJECT_FORMAT, WeightedObject)
_HEADER = struct.Struct(HEADER_FORMAT)


class TextParseError(ValueError):
    """A line of a text point file could not be parsed."""

    def __init__(self, line: int, message: str):
        """Create the error for 1-based line number ``line``."""
        super().__init__(f"Line {line}: {message}")
        self.line = line


class Distribution(str, enum.Enum):
    """Spatial distribution of generated objects."""

    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


class WeightMode(str, enum.Enum):
    """How generated objects are weighted."""

    UNIT = "unit"
    RANDOM_INT = "random"


class GenSpec(t.NamedTuple):
    """Parameters of a synthetic dataset over ``[0, extent]^2``."""

    n: int
    extent: float
    distribution: Distribution = Distribution.UNIFORM
    weight_mode: WeightMode = WeightMode.UNIT
    seed: int = 0

    @classmethod
    def desk_scale(cls, n: int, **kwargs: t.Any) -> "GenSpec":
        """A spec whose extent grows with the cardinality as ``4 * n``.

        Examples:
            >>> from maxrs.datasets import GenSpec
            >>> GenSpec.desk_scale(1000).extent
            4000.0
        """
        return cls(n, float(4 * max(n, 1)), **kwargs)


def _check_spec(spec: GenSpec) -> None:
    if spec.n < 0:
        raise ValueError(f"Object count {spec.n} was negative.")
    if not spec.extent > 0:
        raise ValueError(f"Extent {spec.extent} was not positive.")


def generate_arrays(spec: GenSpec) -> np.ndarray:
    """Generate the ``n x 3`` array of x, y and weight columns for ``spec``.

    The same spec always yields the same array.

    Examples:
        >>> from maxrs.datasets import GenSpec, generate_arrays
        >>> generate_arrays(GenSpec(3, 10.0, seed=7)).shape
        (3, 3)
    """
    _check_spec(spec)
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if Distribution(spec.distribution) is Distribution.UNIFORM:
        coords = rng.uniform(0.0, spec.extent, size=(spec.n, 2))
    else:
        centre, spread = spec.extent / 2, spec.extent / GAUSSIAN_SPREAD
        coords = rng.normal(centre, spread, size=(spec.n, 2))
        outside = ((coords < 0) | (coords > spec.extent)).any(axis=1)
        while outside.any():
            coords[outside] = rng.normal(centre, spread, size=(int(outside.sum()), 2))
            outside = ((coords < 0) | (coords > spec.extent)).any(axis=1)
    if WeightMode(spec.weight_mode) is WeightMode.UNIT:
        weights = np.ones(spec.n)
    else:
        low, high = RANDOM_WEIGHT_RANGE
        weights = rng.integers(low, high + 1, size=spec.n).astype(np.float64)
    return np.column_stack((coords, weights)).reshape(-1, 3)


def generate(spec: GenSpec, store: BlockStore) -> BlockFile[WeightedObject]:
    """Generate a dataset into a new object block file.

    Args:
        spec: What to generate.
        store: The block store receiving the file.

    Returns:
        The closed object file.

    Examples:
        >>> from maxrs.datasets import GenSpec, generate
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> objects = generate(GenSpec(100, 400.0, seed=1), BlockStore(EMConfig.create(8, 64)))
        >>> len(objects), all(0 <= o.x <= 400 and 0 <= o.y <= 400 for o in objects.scan())
        (100, True)
    """
    data = generate_arrays(spec)
    logger.debug("Generated %d %s objects over [0, %s]", spec.n, Distribution(spec.distribution).value, spec.extent)
    return store.from_records(OBJECT_CODEC, (WeightedObject(*map(float, row)) for row in data), "generated")


def save_objects(objects: t.Iterable[WeightedObject], path: str, generator: t.Optional[str] = None) -> int:
    """Write objects to a binary object file.

    The 16-byte header holds the magic, the format version, the generator identifier (0 for
    objects that were not generated) and the record count.

    Args:
        objects: The objects to write.
        path: Destination file.
        generator: Name of the generator that produced the objects.

    Returns:
        The number of objects written.
    """
    records = list(objects)
    flags = GENERATOR_IDS[generator] if generator else 0
    with open(path, "wb") as handle:
        handle.write(_HEADER.pack(FILE_MAGIC, FILE_VERSION, flags, len(records)))
        handle.write(OBJECT_CODEC.pack(records))
    return len(records)


def save_generated(spec: GenSpec, path: str) -> int:
    """Generate ``spec`` straight into an object file; identical specs give identical bytes."""
    data = generate_arrays(spec)
    return save_objects((WeightedObject(*map(float, row)) for row in data), path, DEFAULT_GENERATOR)


def read_header(path: str) -> t.Tuple[int, int]:
    """Validate the header of an object file and return its generator flags and record count.

    Raises:
        ValueError: When the file is not an object file of a supported version.
    """
    with open(path, "rb") as handle:
        raw = handle.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path} is too short to be an object file.")
    magic, version, flags, count = _HEADER.unpack(raw)
    if magic != FILE_MAGIC:
        raise ValueError(f"{path} does not start with {FILE_MAGIC!r}.")
    if version != FILE_VERSION:
        raise ValueError(f"{path} has unsupported format version {version}.")
    return flags, count


def load_objects(path: str, store: BlockStore) -> BlockFile[WeightedObject]:
    """Load a binary object file into a new object block file.

    Raises:
        ValueError: When the header is invalid or the record count disagrees with the file size.
    """
    _, count = read_header(path)
    block_bytes = OBJECT_CODEC.size * store.config.B
    target = store.create(OBJECT_CODEC, "loaded")
    with open(path, "rb") as handle:
        handle.seek(_HEADER.size)
        while True:
            chunk = handle.read(block_bytes)
            if not chunk:
                break
            if len(chunk) % OBJECT_CODEC.size:
                raise ValueError(f"{path} ends with a partial record.")
            target.append_records(OBJECT_CODEC.unpack(chunk))
    target.close()
    if target.length != count:
        raise ValueError(f"{path} holds {target.length} records but its header says {count}.")
    return target


def parse_text_points(
    lines: t.Iterable[t.Union[str, bytes]], default_weight: float = 1.0
) -> t.List[WeightedObject]:
    """Parse ``x y`` or ``x y w`` lines; blank lines and ``#`` comments are skipped.

    Byte lines are decoded as UTF-8.

    Raises:
        TextParseError: On a malformed or undecodable line.

    Examples:
        >>> from maxrs.datasets import parse_text_points
        >>> parse_text_points(["1 2", "3 4 5"])
        [WeightedObject(x=1.0, y=2.0, w=1.0), WeightedObject(x=3.0, y=4.0, w=5.0)]
    """
    objects = []
    for number, line in enumerate(lines, start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise TextParseError(number, f"not UTF-8 at byte {exc.start}") from exc
        fields = line.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) not in (2, 3):
            raise TextParseError(number, f"expected 2 or 3 fields, found {len(fields)}")
        try:
            values = [float(field) for field in fields]
        except ValueError as exc:
            raise TextParseError(number, str(exc)) from exc
        weight = values[2] if len(values) == 3 else default_weight
        try:
            objects.append(check_object(WeightedObject(values[0], values[1], weight)))
        except ValueError as exc:
            raise TextParseError(number, str(exc)) from exc
    return objects


def normalize(objects: t.Sequence[WeightedObject], extent: float = NORMALIZED_EXTENT) -> t.List[WeightedObject]:
    """Rescale each axis affinely so the bounding box becomes ``[0, extent]^2``.

    A degenerate axis maps to 0.

    Examples:
        >>> from maxrs.datasets import normalize
        >>> from maxrs.geometry import WeightedObject
        >>> [tuple(o) for o in normalize([WeightedObject(1, 2), WeightedObject(3, 6)], 100.0)]
        [(0.0, 0.0, 1.0), (100.0, 100.0, 1.0)]
    """
    if not objects:
        return []
    data = np.asarray([tuple(o) for o in objects], dtype=np.float64)
    low, high = data[:, :2].min(axis=0), data[:, :2].max(axis=0)
    span = np.where(high > low, high - low, 1.0)
    data[:, :2] = (data[:, :2] - low) / span * extent
    return [WeightedObject(*map(float, row)) for row in data]


def load_text_points(
    path: str, store: BlockStore, default_weight: float = 1.0, rescale: bool = False
) -> BlockFile[WeightedObject]:
    """Load a UTF-8 text point file into a new object block file.

    Args:
        path: The text file.
        store: The block store receiving the file.
        default_weight: Weight of objects given as ``x y``.
        rescale: Map the coordinates onto ``[0, 1000000]^2``.

    Returns:
        The closed object file.

    Raises:
        TextParseError: On a malformed or undecodable line.
    """
    with open(path, "rb") as handle:
        objects = parse_text_points(handle, default_weight)
    if rescale:
        objects = normalize(objects)
    logger.debug("Loaded %d objects from %s", len(objects), path)
    return store.from_records(OBJECT_CODEC, objects, "text")


def save_text_points(objects: t.Iterable[WeightedObject], path: str) -> int:
    """Write objects as ``x y w`` lines; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for o in objects:
            handle.write(f"{o.x!r} {o.y!r} {o.w!r}\n")
            count += 1
    return count
