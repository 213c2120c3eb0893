"""Quarter-approximate MaxCRS: where to centre a disk of diameter ``d`` to cover the most weight.

Each disk is replaced by its bounding square, the exact MaxRS solver finds the best square
centre ``p0``, and the best of ``p0`` and four diagonal neighbours at distance ``sigma`` is
returned. Every object inside the square at ``p0`` lies in one of the four neighbouring disks,
so the answer covers at least a quarter of the optimum.
"""

import logging
import math
import typing as t

from maxrs.emstore import BlockFile, IOStats
from maxrs.exact import SweepTrace, maxrs_of_rects
from maxrs.geometry import Point, WeightedObject, check_size, circle_of_object, covers_circle, mbr_of_circle

logger = logging.getLogger(__name__)


class Candidate(t.NamedTuple):
    """A candidate centre and the weight its disk covers."""

    point: Point
    value: float


class CrsAnswer(t.NamedTuple):
    """Result of an approximate MaxCRS query.

    Attributes:
        point: The chosen disk centre.
        value: Weight covered by the open disk at ``point``.
        candidates: ``p0`` followed by the four shifted points, with their values.
        mbr_value: Weight covered by the best bounding square, an upper bound of the optimum.
        io_sort: Block transfers sorting the bounding squares.
        io_sweep: Block transfers of the square sweep and the five disk scans.
    """

    point: Point
    value: float
    candidates: t.Tuple[Candidate, ...]
    mbr_value: float
    io_sort: IOStats
    io_sweep: IOStats

    @property
    def io_total(self) -> int:
        """Block transfers of the whole query."""
        return self.io_sort.total + self.io_sweep.total


def sigma_range(d: float) -> t.Tuple[float, float]:
    """The open interval of shifting distances that keep the quarter guarantee.

    Examples:
        >>> from maxrs.approx import sigma_range
        >>> lo, hi = sigma_range(2)
        >>> round(lo, 6), hi
        (0.414214, 1.0)
    """
    check_size("d", d)
    return (math.sqrt(2) - 1) * d / 2, d / 2


def default_sigma(d: float) -> float:
    """Midpoint of :func:`sigma_range`, giving axis offsets of exactly ``d / 4``.

    Examples:
        >>> from maxrs.approx import default_sigma
        >>> round(default_sigma(4) / math.sqrt(2), 12)
        1.0
    """
    check_size("d", d)
    return math.sqrt(2) / 4 * d


def check_sigma(sigma: float, d: float) -> float:
    """Return ``sigma`` when it lies strictly inside :func:`sigma_range`.

    Raises:
        ValueError: Otherwise.
    """
    lo, hi = sigma_range(d)
    if not lo < sigma < hi:
        raise ValueError(f"Shifting distance {sigma} was not within the open interval ({lo}, {hi}) for d={d}.")
    return sigma


def shifted_points(p0: Point, sigma: float, d: float) -> t.Tuple[Point, Point, Point, Point]:
    """The four points at distance ``sigma`` from ``p0`` along the diagonals, one per quadrant.

    Args:
        p0: The centre of the best bounding square.
        sigma: Shifting distance.
        d: Disk diameter, bounding the valid ``sigma``.

    Returns:
        The upper-right, upper-left, lower-left and lower-right points.

    Raises:
        ValueError: When ``sigma`` is outside the valid open interval.

    Examples:
        >>> from maxrs.approx import shifted_points
        >>> from maxrs.geometry import Point
        >>> [tuple(round(v, 12) for v in p) for p in shifted_points(Point(0, 0), math.sqrt(2) / 2, 2)]
        [(0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5), (0.5, -0.5)]
    """
    check_sigma(sigma, d)
    off = sigma / math.sqrt(2)
    return (
        Point(p0.x + off, p0.y + off),
        Point(p0.x - off, p0.y + off),
        Point(p0.x - off, p0.y - off),
        Point(p0.x + off, p0.y - off),
    )


def eval_circle_value(objects: BlockFile[WeightedObject], p: Point, d: float) -> float:
    """Weight of the objects inside the open disk of diameter ``d`` at ``p``, in one scan.

    Examples:
        >>> from maxrs.approx import eval_circle_value
        >>> from maxrs.datasets import OBJECT_CODEC
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.geometry import Point, WeightedObject
        >>> store = BlockStore(EMConfig.create(2, 8))
        >>> records = [WeightedObject(0.0, 0.0, 3.0), WeightedObject(2.0, 0.0, 1.0)]
        >>> objects = store.from_records(OBJECT_CODEC, records)
        >>> eval_circle_value(objects, Point(0.0, 0.0), 2)
        3.0
    """
    check_size("d", d)
    return float(sum(o.w for o in objects.scan() if covers_circle(circle_of_object(o, d), p)))


def best_of_five(
    objects: BlockFile[WeightedObject], p0: Point, d: float, sigma: float
) -> t.Tuple[Candidate, t.Tuple[Candidate, ...]]:
    """Evaluate ``p0`` and its four shifted points with one scan each.

    Returns:
        The best candidate, ties going to the smallest x and then the smallest y, and all five
        candidates with ``p0`` first.
    """
    points = (p0, *shifted_points(p0, sigma, d))
    candidates = tuple(Candidate(p, eval_circle_value(objects, p, d)) for p in points)
    best = min(candidates, key=lambda c: (-c.value, c.point.x, c.point.y))
    return best, candidates


def approx_maxcrs(
    objects: BlockFile[WeightedObject],
    d: float,
    sigma: t.Optional[float] = None,
    trace: t.Optional[SweepTrace] = None,
) -> CrsAnswer:
    """Answer a MaxCRS query within a factor of four.

    Args:
        objects: Closed block file of weighted objects.
        d: Disk diameter.
        sigma: Shifting distance, :func:`default_sigma` when omitted.
        trace: Optional collector of the MaxRS recursion.

    Returns:
        The best of the five candidates; the origin with value 0 when there are no objects.

    Raises:
        ValueError: When ``d`` or ``sigma`` is invalid.

    Examples:
        >>> from maxrs.approx import approx_maxcrs
        >>> from maxrs.datasets import OBJECT_CODEC
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.geometry import WeightedObject
        >>> store = BlockStore(EMConfig.create(2, 8))
        >>> objects = store.from_records(OBJECT_CODEC, [WeightedObject(5.0, 5.0, 2.0)])
        >>> answer = approx_maxcrs(objects, 2)
        >>> answer.point, answer.value
        (Point(x=4.5, y=4.5), 2.0)
    """
    check_size("d", d)
    sigma = default_sigma(d) if sigma is None else check_sigma(sigma, d)
    store = objects.store
    start = store.io_snapshot()
    if objects.length == 0:
        origin = Candidate(Point(0.0, 0.0), 0.0)
        return CrsAnswer(origin.point, 0.0, (origin,) * 5, 0.0, IOStats(), IOStats())
    squares = (mbr_of_circle(circle_of_object(o, d)) for o in objects.scan())
    square = maxrs_of_rects(squares, store, trace)
    best, candidates = best_of_five(objects, square.point, d, sigma)
    logger.debug(
        "Square centre %s covers %s; best disk centre %s covers %s", square.point, square.value, best.point, best.value
    )
    io_sweep = store.io_snapshot().since(start).since(square.io_sort)
    return CrsAnswer(best.point, best.value, candidates, square.value, square.io_sort, io_sweep)
