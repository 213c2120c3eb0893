"""Geometric value types and the object to rectangle / circle to MBR transformations.

Every region in this library is OPEN: a point lying exactly on the boundary of a rectangle
or circle is not covered by it.
"""

import math
import typing as t


class Point(t.NamedTuple):
    """A location in the plane."""

    x: float
    y: float


class WeightedObject(t.NamedTuple):
    """An input object with a non-negative weight."""

    x: float
    y: float
    w: float = 1.0


class WeightedRect(t.NamedTuple):
    """An open axis-aligned rectangle ``(x1, x2) x (y1, y2)`` carrying a weight."""

    x1: float
    x2: float
    y1: float
    y2: float
    w: float = 1.0


class WeightedCircle(t.NamedTuple):
    """An open disk of diameter ``d`` centred at ``(cx, cy)`` carrying a weight."""

    cx: float
    cy: float
    d: float
    w: float = 1.0


def check_size(name: str, value: float) -> None:
    """Raise ValueError unless ``value`` is a positive finite length."""
    if not value > 0 or math.isinf(value):
        raise ValueError(f"`{name}` of {value} was not a positive finite length.")


def check_object(o: WeightedObject) -> WeightedObject:
    """Validate an object, returning it unchanged.

    Args:
        o: The object to validate.

    Returns:
        The same object.

    Raises:
        ValueError: When a coordinate is not finite or the weight is negative.

    Examples:
        >>> from maxrs.geometry import check_object, WeightedObject
        >>> check_object(WeightedObject(1.0, 2.0, 3.0))
        WeightedObject(x=1.0, y=2.0, w=3.0)
    """
    if not (math.isfinite(o.x) and math.isfinite(o.y)):
        raise ValueError(f"Object {o} does not have finite coordinates.")
    if not o.w >= 0 or math.isinf(o.w):
        raise ValueError(f"Object {o} does not have a finite non-negative weight.")
    return o


def rect_of_object(o: WeightedObject, d1: float, d2: float) -> WeightedRect:
    """Build the ``d1 x d2`` rectangle centred on an object.

    A point ``p`` is covered by the result exactly when the ``d1 x d2`` query rectangle centred
    at ``p`` covers ``o``.

    Args:
        o: The object to transform.
        d1: Width of the query rectangle.
        d2: Height of the query rectangle.

    Returns:
        The open rectangle carrying the object's weight.

    Examples:
        >>> from maxrs.geometry import rect_of_object, WeightedObject
        >>> rect_of_object(WeightedObject(10, 20, 3), 4, 6)
        WeightedRect(x1=8.0, x2=12.0, y1=17.0, y2=23.0, w=3)
        >>> rect_of_object(WeightedObject(0, 0, 1), 2, 2)
        WeightedRect(x1=-1.0, x2=1.0, y1=-1.0, y2=1.0, w=1)
    """
    check_size("d1", d1)
    check_size("d2", d2)
    half_w, half_h = d1 / 2, d2 / 2
    return WeightedRect(o.x - half_w, o.x + half_w, o.y - half_h, o.y + half_h, o.w)


def rect_at(p: Point, d1: float, d2: float, w: float = 1.0) -> WeightedRect:
    """The ``d1 x d2`` query rectangle centred at ``p``.

    Examples:
        >>> from maxrs.geometry import rect_at, Point
        >>> rect_at(Point(1, 1), 2, 4)
        WeightedRect(x1=0.0, x2=2.0, y1=-1.0, y2=3.0, w=1.0)
    """
    check_size("d1", d1)
    check_size("d2", d2)
    return WeightedRect(p.x - d1 / 2, p.x + d1 / 2, p.y - d2 / 2, p.y + d2 / 2, w)


def covers_rect(r: WeightedRect, p: Point) -> bool:
    """Whether the open rectangle ``r`` covers ``p``.

    Args:
        r: The rectangle.
        p: The point to test.

    Returns:
        True when ``p`` lies strictly inside ``r``.

    Examples:
        >>> from maxrs.geometry import covers_rect, WeightedRect, Point
        >>> covers_rect(WeightedRect(0, 2, 0, 2), Point(1, 1))
        True
        >>> covers_rect(WeightedRect(0, 2, 0, 2), Point(2, 1))
        False
        >>> covers_rect(WeightedRect(0, 2, 0, 2), Point(3, 1))
        False
    """
    return r.x1 < p.x < r.x2 and r.y1 < p.y < r.y2


def location_weight(rects: t.Iterable[WeightedRect], p: Point) -> float:
    """Total weight of the rectangles covering ``p``.

    Args:
        rects: The rectangles to test.
        p: The point to evaluate.

    Returns:
        The location-weight of ``p``.

    Examples:
        >>> from maxrs.geometry import location_weight, WeightedRect, Point
        >>> location_weight([], Point(0, 0))
        0
        >>> location_weight([WeightedRect(0, 2, 0, 2), WeightedRect(-1, 3, -1, 3)], Point(1, 1))
        2.0
    """
    return sum(r.w for r in rects if covers_rect(r, p))


def range_sum(objects: t.Iterable[WeightedObject], p: Point, d1: float, d2: float) -> float:
    """Total weight of the objects inside the open ``d1 x d2`` rectangle centred at ``p``.

    This is the MaxRS objective evaluated directly on the objects.

    Examples:
        >>> from maxrs.geometry import range_sum, WeightedObject, Point
        >>> range_sum([WeightedObject(0, 0, 2), WeightedObject(5, 5, 1)], Point(0.5, 0.5), 2, 2)
        2
    """
    query = rect_at(p, d1, d2)
    return sum(o.w for o in objects if covers_rect(query, Point(o.x, o.y)))


def circle_of_object(o: WeightedObject, d: float) -> WeightedCircle:
    """The diameter ``d`` disk centred on an object.

    Examples:
        >>> from maxrs.geometry import circle_of_object, WeightedObject
        >>> circle_of_object(WeightedObject(1, 2, 3), 4)
        WeightedCircle(cx=1, cy=2, d=4, w=3)
    """
    check_size("d", d)
    return WeightedCircle(o.x, o.y, d, o.w)


def mbr_of_circle(c: WeightedCircle) -> WeightedRect:
    """The minimum bounding rectangle of a disk: the open ``d x d`` square around its centre.

    Args:
        c: The disk.

    Returns:
        The bounding square carrying the disk's weight.

    Examples:
        >>> from maxrs.geometry import mbr_of_circle, WeightedCircle
        >>> mbr_of_circle(WeightedCircle(0, 0, 2, 1))
        WeightedRect(x1=-1.0, x2=1.0, y1=-1.0, y2=1.0, w=1)
        >>> mbr_of_circle(WeightedCircle(5, -3, 1, 2))
        WeightedRect(x1=4.5, x2=5.5, y1=-3.5, y2=-2.5, w=2)
    """
    check_size("d", c.d)
    half = c.d / 2
    return WeightedRect(c.cx - half, c.cx + half, c.cy - half, c.cy + half, c.w)


def covers_circle(c: WeightedCircle, p: Point) -> bool:
    """Whether the open disk ``c`` covers ``p``.

    Examples:
        >>> from maxrs.geometry import covers_circle, WeightedCircle, Point
        >>> covers_circle(WeightedCircle(0, 0, 2), Point(0, 0))
        True
        >>> covers_circle(WeightedCircle(0, 0, 2), Point(1, 0))
        False
        >>> covers_circle(WeightedCircle(0, 0, 2), Point(0.6, 0.6))
        True
    """
    dx, dy = p.x - c.cx, p.y - c.cy
    radius = c.d / 2
    return dx * dx + dy * dy < radius * radius


def disk_sum(objects: t.Iterable[WeightedObject], p: Point, d: float) -> float:
    """Total weight of the objects inside the open disk of diameter ``d`` centred at ``p``.

    Examples:
        >>> from maxrs.geometry import disk_sum, WeightedObject, Point
        >>> disk_sum([WeightedObject(0, 0, 2), WeightedObject(1, 0, 5)], Point(0, 0), 2)
        2
    """
    query = WeightedCircle(p.x, p.y, d)
    return sum(o.w for o in objects if covers_circle(query, Point(o.x, o.y)))
