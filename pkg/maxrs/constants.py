"""Constants used by the maxrs library: record layouts, defaults and benchmark grids."""

import typing as t

# Record layouts, all little-endian. Sizes: object 24, event 40, span 32, tuple 32, edge 8 bytes.
OBJECT_FORMAT = "<ddd"
EVENT_FORMAT = "<dB7xddd"
SPAN_FORMAT = "<dB3xII4xd"
TUPLE_FORMAT = "<dddd"
EDGE_FORMAT = "<d"

# Object file header: magic, version, flags, count.
FILE_MAGIC = b"MXRS"
FILE_VERSION = 1
HEADER_FORMAT = "<4sHHQ"

# Pseudo-random generator identifiers recorded in the header flags.
GENERATOR_IDS: t.Dict[str, int] = {"pcg64": 1}
DEFAULT_GENERATOR = "pcg64"

DEFAULT_BLOCK_RECORDS = 16
DEFAULT_MEM_RECORDS = 256

# Coordinates of real datasets are rescaled into [0, NORMALIZED_EXTENT].
NORMALIZED_EXTENT = 1000000.0

# Relative tolerance for comparing floating sums.
SUM_TOLERANCE = 1e-9

# Inward nudge of circle-intersection candidates, as a fraction of the diameter.
NUDGE_FRACTION = 1e-7

# Gaussian datasets: one cluster at the domain centre, per-axis deviation extent / GAUSSIAN_SPREAD.
GAUSSIAN_SPREAD = 8.0
RANDOM_WEIGHT_RANGE = (1, 10)

CSV_HEADER = [
    "algorithm",
    "n",
    "B",
    "M",
    "range_or_diameter",
    "io_sort",
    "io_sweep",
    "io_total",
    "answer_value",
    "wall_ms",
]

BENCH_CARDINALITIES = [1000, 2000, 5000, 10000, 20000]
BENCH_BLOCK_RECORDS = [8, 16, 32]
BENCH_MEM_RECORDS = [128, 256, 512, 1024]
# Default range and diameter sweeps as fractions of the dataset extent.
BENCH_SIZE_FRACTIONS = [0.001, 0.002, 0.004, 0.01, 0.02]

# Default query side as a fraction of the dataset extent.
DEFAULT_RANGE_FRACTION = 1.0 / 250.0
