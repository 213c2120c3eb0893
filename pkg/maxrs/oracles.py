"""In-memory brute-force MaxRS and MaxCRS solvers for desk-scale instances."""

import typing as t

import numpy as np

from maxrs.constants import NUDGE_FRACTION
from maxrs.geometry import Point, WeightedObject, check_size

_CHUNK = 2048


class OracleAnswer(t.NamedTuple):
    """An optimal centre and the weight it covers."""

    point: Point
    value: float


def _columns(objects: t.Sequence[WeightedObject]) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.asarray([tuple(o) for o in objects], dtype=np.float64).reshape(-1, 3)
    return data[:, 0], data[:, 1], data[:, 2]


def brute_maxrs(objects: t.Sequence[WeightedObject], d1: float, d2: float) -> OracleAnswer:
    """Exhaustive MaxRS over the cells of the rectangle arrangement.

    Location-weight is constant on every open cell between consecutive distinct rectangle edge
    coordinates, so evaluating each cell midpoint is exact. Cells are scanned column by column;
    ties go to the leftmost, then lowest, cell.

    Args:
        objects: The weighted objects.
        d1: Width of the query rectangle.
        d2: Height of the query rectangle.

    Returns:
        The midpoint of a best cell and its location-weight; the origin and 0 without objects.

    Examples:
        >>> from maxrs.oracles import brute_maxrs
        >>> from maxrs.geometry import WeightedObject
        >>> brute_maxrs([WeightedObject(0.0, 0.0, 7.0)], 2, 2)
        OracleAnswer(point=Point(x=0.0, y=0.0), value=7.0)
        >>> brute_maxrs([WeightedObject(0.0, 0.0, 1.0), WeightedObject(1.0, 1.0, 1.0)], 2, 2).value
        2.0
        >>> brute_maxrs([], 2, 2)
        OracleAnswer(point=Point(x=0.0, y=0.0), value=0.0)
    """
    check_size("d1", d1)
    check_size("d2", d2)
    if not objects:
        return OracleAnswer(Point(0.0, 0.0), 0.0)
    x, y, w = _columns(objects)
    x1, x2, y1, y2 = x - d1 / 2, x + d1 / 2, y - d2 / 2, y + d2 / 2
    xs = np.unique(np.concatenate((x1, x2)))
    ys = np.unique(np.concatenate((y1, y2)))
    x_mid = (xs[:-1] + xs[1:]) / 2
    y_mid = (ys[:-1] + ys[1:]) / 2
    lo = np.searchsorted(ys, y1)
    hi = np.searchsorted(ys, y2)
    best_value, best_point = 0.0, Point(0.0, 0.0)
    found = False
    for cx in x_mid:
        active = (x1 < cx) & (cx < x2)
        if not active.any():
            continue
        diff = np.zeros(len(ys))
        np.add.at(diff, lo[active], w[active])
        np.add.at(diff, hi[active], -w[active])
        cells = np.cumsum(diff)[:-1]
        k = int(np.argmax(cells))
        if not found or cells[k] > best_value:
            best_value, best_point = float(cells[k]), Point(float(cx), float(y_mid[k]))
            found = True
    return OracleAnswer(best_point, best_value)


def _intersections(x: np.ndarray, y: np.ndarray, radius: float, nudge: float) -> np.ndarray:
    i, j = np.triu_indices(len(x), k=1)
    dx, dy = x[j] - x[i], y[j] - y[i]
    dist = np.hypot(dx, dy)
    keep = (dist > 0) & (dist < 2 * radius)
    i, j, dx, dy, dist = i[keep], j[keep], dx[keep], dy[keep], dist[keep]
    half = np.sqrt(radius * radius - (dist / 2) ** 2)
    mx, my = (x[i] + x[j]) / 2, (y[i] + y[j]) / 2
    ux, uy = dx / dist, dy / dist
    points = []
    for sign in (1.0, -1.0):
        px, py = mx - sign * half * uy, my + sign * half * ux
        # Step towards both centres so the point lands inside both open disks.
        ax, ay = x[i] - px, y[i] - py
        bx, by = x[j] - px, y[j] - py
        na, nb = np.hypot(ax, ay), np.hypot(bx, by)
        points.append(np.column_stack((px + nudge * (ax / na + bx / nb), py + nudge * (ay / na + by / nb))))
    return np.concatenate(points)


def brute_maxcrs(objects: t.Sequence[WeightedObject], d: float) -> OracleAnswer:
    """Exhaustive MaxCRS over object locations and pairwise disk-boundary intersections.

    The closure of a deepest region of the disk arrangement contains a disk centre or a
    crossing of two disk boundaries. Crossings are nudged inwards by ``1e-7 * d`` towards both
    generating centres before their coverage is counted.

    Args:
        objects: The weighted objects.
        d: Disk diameter.

    Returns:
        The best candidate centre and the weight its open disk covers.

    Examples:
        >>> from maxrs.oracles import brute_maxcrs
        >>> from maxrs.geometry import WeightedObject
        >>> brute_maxcrs([WeightedObject(0.0, 0.0, 4.0)], 2).value
        4.0
        >>> brute_maxcrs([WeightedObject(0.0, 0.0, 1.0), WeightedObject(1.5, 0.0, 2.0)], 2).value
        3.0
    """
    check_size("d", d)
    if not objects:
        return OracleAnswer(Point(0.0, 0.0), 0.0)
    x, y, w = _columns(objects)
    radius = d / 2
    candidates = np.concatenate((np.column_stack((x, y)), _intersections(x, y, radius, NUDGE_FRACTION * d)))
    best_value, best_index = -1.0, 0
    for start in range(0, len(candidates), _CHUNK):
        chunk = candidates[start : start + _CHUNK]
        inside = (chunk[:, :1] - x) ** 2 + (chunk[:, 1:] - y) ** 2 < radius * radius
        values = inside @ w
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value, best_index = float(values[k]), start + k
    px, py = candidates[best_index]
    return OracleAnswer(Point(float(px), float(py)), best_value)


def grid_maxcrs(objects: t.Sequence[WeightedObject], d: float, steps: int = 200) -> OracleAnswer:
    """Best disk centre on a regular grid of pitch ``d / steps`` over the objects' bounding box.

    A lower bound of the MaxCRS optimum, used to cross-check :func:`brute_maxcrs`.
    """
    check_size("d", d)
    if not objects:
        return OracleAnswer(Point(0.0, 0.0), 0.0)
    x, y, w = _columns(objects)
    pitch = d / steps
    gx = np.arange(x.min(), x.max() + pitch, pitch)
    gy = np.arange(y.min(), y.max() + pitch, pitch)
    radius_sq = (d / 2) ** 2
    best = OracleAnswer(Point(0.0, 0.0), -1.0)
    for cx in gx:
        near = np.abs(x - cx) < d / 2
        if not near.any():
            continue
        inside = (cx - x[near]) ** 2 + (gy[:, None] - y[near]) ** 2 < radius_sq
        values = inside @ w[near]
        k = int(np.argmax(values))
        if values[k] > best.value:
            best = OracleAnswer(Point(float(cx), float(gy[k])), float(values[k]))
    return best
