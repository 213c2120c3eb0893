"""Exact MaxRS by distribution sweep over block files.

The input rectangles are split into vertical slabs until a sub-problem fits in memory, solved by
an in-memory plane sweep, and the per-slab results are combined bottom-up by a merge sweep that
adds the weight of rectangles spanning whole slabs.
"""

import bisect
import enum
import itertools
import logging
import math
import typing as t
from heapq import merge
from operator import attrgetter

import numpy as np

from maxrs.constants import EDGE_FORMAT, EVENT_FORMAT, SPAN_FORMAT, SUM_TOLERANCE, TUPLE_FORMAT
from maxrs.emstore import BlockFile, BlockStore, IOStats, RecordCodec, external_sort
from maxrs.geometry import Point, WeightedObject, WeightedRect, check_size, rect_of_object

logger = logging.getLogger(__name__)


class EmptyInputError(ValueError):
    """A slab-file without any tuple was given where at least one is required."""


class EventKind(enum.IntEnum):
    """Which horizontal edge of a rectangle an event stands for."""

    BOTTOM = 0
    TOP = 1


class RectEvent(t.NamedTuple):
    """A horizontal edge of a (possibly cropped) rectangle."""

    y: float
    kind: int
    x1: float
    x2: float
    w: float


class EdgeRecord(t.NamedTuple):
    """The x-coordinate of an original vertical rectangle edge."""

    x: float


class Slab(t.NamedTuple):
    """A vertical strip ``[x_lo, x_hi)`` of the plane.

    ``edge_at_lo`` marks a slab whose left bound coincides with an original vertical edge, across
    which intervals of neighbouring slabs must not be joined.
    """

    x_lo: float
    x_hi: float
    edge_at_lo: bool = False


class SpanEvent(t.NamedTuple):
    """A horizontal edge of a rectangle piece covering child slabs ``slab_from..slab_to`` entirely."""

    y: float
    kind: int
    slab_from: int
    slab_to: int
    w: float


class SlabTuple(t.NamedTuple):
    """The max-interval ``[x1, x2]`` of a slab for the strip above ``y`` and its location-weight."""

    y: float
    x1: float
    x2: float
    sum: float


class SlabFile(t.NamedTuple):
    """A y-sorted block file of slab tuples together with the slab it describes."""

    file: BlockFile[SlabTuple]
    slab: Slab


class MaxRegion(t.NamedTuple):
    """An open rectangle every interior point of which attains the maximum location-weight."""

    x1: float
    x2: float
    y1: float
    y2: float
    sum: float


class SubProblem(t.NamedTuple):
    """The y-sorted events and x-sorted edges of one slab."""

    events: BlockFile[RectEvent]
    edges: BlockFile[EdgeRecord]
    slab: Slab


class NodeTrace(t.NamedTuple):
    """Instrumentation of one recursion node."""

    depth: int
    events: int
    rects: int
    tuples: int
    children: int
    base: bool


class MaxRSAnswer(t.NamedTuple):
    """Result of an end-to-end MaxRS query."""

    point: Point
    value: float
    region: MaxRegion
    io_sort: IOStats
    io_sweep: IOStats

    @property
    def io_total(self) -> int:
        """Block transfers of both phases."""
        return self.io_sort.total + self.io_sweep.total


class SweepTrace:
    """Collects one :class:`NodeTrace` per recursion node of :func:`exact_maxrs`."""

    def __init__(self) -> None:
        """Create an empty trace."""
        self.nodes: t.List[NodeTrace] = []

    def record(self, node: NodeTrace) -> None:
        """Append a node."""
        self.nodes.append(node)

    @property
    def max_depth(self) -> int:
        """Deepest recursion level reached; 0 when the root was solved in memory."""
        return max((node.depth for node in self.nodes), default=0)


EVENT_CODEC: RecordCodec[RectEvent] = RecordCodec("event", EVENT_FORMAT, RectEvent)
EDGE_CODEC: RecordCodec[EdgeRecord] = RecordCodec("edge", EDGE_FORMAT, EdgeRecord)
SPAN_CODEC: RecordCodec[SpanEvent] = RecordCodec("span", SPAN_FORMAT, SpanEvent)
TUPLE_CODEC: RecordCodec[SlabTuple] = RecordCodec("tuple", TUPLE_FORMAT, SlabTuple)

WHOLE_PLANE = Slab(-math.inf, math.inf)
_EMPTY_REGION = MaxRegion(-math.inf, math.inf, -math.inf, math.inf, 0.0)


def _signed(kind: int, w: float) -> float:
    return w if kind == EventKind.BOTTOM else -w


def _clean(value: float) -> float:
    return 0.0 if abs(value) <= SUM_TOLERANCE else float(value)


def _floor(best: float) -> float:
    return best - SUM_TOLERANCE * max(1.0, abs(best))


def events_of_rect(r: WeightedRect) -> t.Tuple[RectEvent, RectEvent]:
    """The BOTTOM and TOP events of a rectangle.

    Examples:
        >>> from maxrs.exact import events_of_rect
        >>> from maxrs.geometry import WeightedRect
        >>> [tuple(e) for e in events_of_rect(WeightedRect(-1.0, 1.0, -1.0, 1.0, 1.0))]
        [(-1.0, 0, -1.0, 1.0, 1.0), (1.0, 1, -1.0, 1.0, 1.0)]
    """
    return (
        RectEvent(r.y1, EventKind.BOTTOM.value, r.x1, r.x2, r.w),
        RectEvent(r.y2, EventKind.TOP.value, r.x1, r.x2, r.w),
    )


def build_rect_inputs(rects: t.Iterable[WeightedRect], store: BlockStore) -> SubProblem:
    """Write the events and edges of rectangles and sort them externally.

    Args:
        rects: The rectangles, streamed once.
        store: The block store receiving the files.

    Returns:
        The root sub-problem over the whole plane.
    """
    events = store.create(EVENT_CODEC, "unsorted")
    edges = store.create(EDGE_CODEC, "unsorted")
    for r in rects:
        events.append_records(events_of_rect(r))
        edges.append(EdgeRecord(r.x1))
        edges.append(EdgeRecord(r.x2))
    events.close()
    edges.close()
    sorted_events = external_sort(events, key=attrgetter("y"))
    sorted_edges = external_sort(edges, key=attrgetter("x"))
    events.remove()
    edges.remove()
    return SubProblem(sorted_events, sorted_edges, WHOLE_PLANE)


def build_inputs(
    objects: BlockFile[WeightedObject], d1: float, d2: float
) -> t.Tuple[BlockFile[RectEvent], BlockFile[EdgeRecord]]:
    """Turn an object file into y-sorted rectangle events and x-sorted vertical edges.

    Each object becomes the open ``d1 x d2`` rectangle centred on it. The block store of
    ``objects`` receives the new files and counts the I/O of both external sorts.

    Args:
        objects: Closed block file of weighted objects.
        d1: Width of the query rectangle.
        d2: Height of the query rectangle.

    Returns:
        The events file holding ``2N`` records and the edges file holding ``2N`` records.

    Examples:
        >>> from maxrs.datasets import OBJECT_CODEC
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.exact import build_inputs
        >>> from maxrs.geometry import WeightedObject
        >>> store = BlockStore(EMConfig.create(2, 8))
        >>> objects = store.from_records(OBJECT_CODEC, [WeightedObject(0.0, 0.0, 1.0)])
        >>> events, edges = build_inputs(objects, 2, 2)
        >>> [(e.y, e.kind) for e in events.scan()]
        [(-1.0, 0), (1.0, 1)]
        >>> [e.x for e in edges.scan()]
        [-1.0, 1.0]
    """
    check_size("d1", d1)
    check_size("d2", d2)
    rects = (rect_of_object(o, d1, d2) for o in objects.scan())
    problem = build_rect_inputs(rects, objects.store)
    return problem.events, problem.edges


def _gap_bound(lower: float, upper: float) -> t.Tuple[float, bool]:
    """A bound strictly between two consecutive edge values, or on ``upper`` when none is representable."""
    mid = (lower + upper) / 2
    if lower < mid < upper:
        return mid, False
    return upper, True


def _boundaries(edges: BlockFile[EdgeRecord], m: int) -> t.Tuple[t.List[float], t.List[bool]]:
    """Child slab bounds near edge ranks ``ceil(E * i / m)``, placed in the gaps between distinct edge values.

    A rank falling inside a run of equal values takes the nearer of the gaps around the run, the
    one after it on a tie. When all edges share one value the single bound sits on it. The flags
    mark bounds lying on an edge value; the slab to the right of such a bound gets ``edge_at_lo``.
    """
    targets = [math.ceil(edges.length * i / m) for i in range(1, m)]
    chosen: t.List[t.Tuple[int, float, float]] = []
    last_gap: t.Optional[t.Tuple[int, float, float]] = None
    target = 0
    consumed = 0
    prev: t.Optional[float] = None
    for edge in edges.scan():
        if prev is not None and edge.x > prev:
            gap = (consumed, prev, edge.x)
            while target < len(targets) and targets[target] <= consumed:
                pick = gap
                if last_gap is not None and targets[target] - last_gap[0] < consumed - targets[target]:
                    pick = last_gap
                if not chosen or pick[0] > chosen[-1][0]:
                    chosen.append(pick)
                target += 1
            last_gap = gap
        consumed += 1
        prev = edge.x
    if prev is None:
        return [], []
    if last_gap is None:
        return [prev], [True]
    if target < len(targets) and (not chosen or last_gap[0] > chosen[-1][0]):
        chosen.append(last_gap)
    placed = [_gap_bound(lower, upper) for _, lower, upper in chosen]
    return [bound for bound, _ in placed], [flag for _, flag in placed]


def divide(
    events: BlockFile[RectEvent], edges: BlockFile[EdgeRecord], slab: Slab
) -> t.Tuple[t.List[SubProblem], BlockFile[SpanEvent]]:
    """Split a sub-problem into at most ``m`` child slabs with roughly equal edge counts.

    Rectangle pieces that cover whole child slabs become span events; the other pieces go to the
    events file of the child that holds their original vertical edge. Every output file keeps
    the y-order of ``events``.

    Args:
        events: The y-sorted events of the slab.
        edges: The x-sorted original vertical edges of the slab.
        slab: The slab being divided.

    Returns:
        The child sub-problems, left to right, and the y-sorted span events.

    Raises:
        ValueError: When the slab holds no edges to divide on.
        RuntimeError: When a bound falls outside the slab, leaving a child no narrower than its parent.
    """
    store = events.store
    bounds, flagged = _boundaries(edges, store.config.m)
    if not bounds:
        raise ValueError(f"Slab {slab} has no vertical edges to divide on.")
    starts = [slab.x_lo, *bounds]
    stops = [*bounds, slab.x_hi]
    slabs = [Slab(lo, hi, k > 0 and flagged[k - 1]) for k, (lo, hi) in enumerate(zip(starts, stops))]
    if any(not s.x_lo < s.x_hi for s in slabs):
        raise RuntimeError(f"Bounds {bounds} do not split {slab} into narrower slabs.")
    logger.debug("Dividing %s: %d events, %d edges into %d slabs", slab, events.length, edges.length, len(slabs))

    child_edges = [store.create(EDGE_CODEC, f"slab{k}") for k in range(len(slabs))]
    for edge in edges.scan():
        child_edges[bisect.bisect_right(bounds, edge.x)].append(edge)
    for f in child_edges:
        f.close()

    child_events = [store.create(EVENT_CODEC, f"slab{k}") for k in range(len(slabs))]
    spanning = store.create(SPAN_CODEC)
    for event in events.scan():
        first = bisect.bisect_right(starts, event.x1) - 1
        last = bisect.bisect_left(starts, event.x2) - 1
        covered: t.List[int] = []
        for k in range(first, last + 1):
            x1, x2 = max(event.x1, starts[k]), min(event.x2, stops[k])
            if x1 >= x2:
                continue
            if x1 == starts[k] and x2 == stops[k]:
                covered.append(k)
            else:
                child_events[k].append(RectEvent(event.y, event.kind, x1, x2, event.w))
        if covered:
            spanning.append(SpanEvent(event.y, event.kind, covered[0], covered[-1], event.w))
    for f in child_events:
        f.close()
    spanning.close()
    children = [SubProblem(ev, ed, s) for ev, ed, s in zip(child_events, child_edges, slabs)]
    return children, spanning


def sweep_tuples(events: t.Sequence[RectEvent], slab: Slab) -> t.Iterator[SlabTuple]:
    """Plane sweep of in-memory events, yielding one slab tuple per distinct event y.

    The x-axis of the slab is cut into slots between consecutive event x-coordinates. All
    events sharing one y are applied before the leftmost maximal run of heaviest slots is read
    off for the strip above that y.

    Args:
        events: Events sorted ascending by y, all inside ``slab``.
        slab: The slab swept.

    Yields:
        The slab tuples in ascending y order.

    Raises:
        ValueError: When the events are not sorted by y or leave the slab.

    Examples:
        >>> from maxrs.exact import sweep_tuples, events_of_rect, WHOLE_PLANE
        >>> from maxrs.geometry import WeightedRect
        >>> for row in sweep_tuples(events_of_rect(WeightedRect(0.0, 2.0, 0.0, 2.0)), WHOLE_PLANE):
        ...     print(tuple(row))
        (0.0, 0.0, 2.0, 1.0)
        (2.0, -inf, inf, 0.0)
    """
    for prev, cur in zip(events, events[1:]):
        if cur.y < prev.y:
            raise ValueError(f"Events were not sorted by y: {cur.y} follows {prev.y}.")
    coords = [slab.x_lo, slab.x_hi]
    for event in events:
        coords.extend((event.x1, event.x2))
    xs = np.unique(np.asarray(coords, dtype=np.float64))
    if xs[0] != slab.x_lo or xs[-1] != slab.x_hi:
        raise ValueError(f"Events reach outside of slab {slab}.")
    slots = np.zeros(len(xs) - 1)
    seams = np.zeros(len(xs))
    for y, batch in itertools.groupby(events, key=attrgetter("y")):
        for event in batch:
            lo, hi = np.searchsorted(xs, (event.x1, event.x2))
            delta = _signed(event.kind, event.w)
            slots[lo:hi] += delta
            seams[lo + 1 : hi] += delta
        best = float(slots.max())
        floor = _floor(best)
        start = int(np.argmax(slots >= floor))
        end = start
        while end + 1 < len(slots) and slots[end + 1] >= floor and seams[end + 1] >= floor:
            end += 1
        yield SlabTuple(float(y), float(xs[start]), float(xs[end + 1]), _clean(best))


def plane_sweep(events: t.Sequence[RectEvent], slab: Slab, store: BlockStore) -> BlockFile[SlabTuple]:
    """Solve an in-memory sub-problem and stream its slab-file to ``store``.

    Args:
        events: Events sorted ascending by y, at most ``M`` of them.
        slab: The slab swept.
        store: The block store receiving the slab-file.

    Returns:
        The closed slab-file.
    """
    return store.from_records(TUPLE_CODEC, sweep_tuples(events, slab), "base")


def _tagged(
    k: int, rows: t.Iterable[t.Union[SlabTuple, SpanEvent]]
) -> t.Iterator[t.Tuple[float, int, t.Union[SlabTuple, SpanEvent]]]:
    for row in rows:
        yield row.y, k, row


def merge_sweep(slab_files: t.Sequence[SlabFile], spanning: BlockFile[SpanEvent], slab: Slab) -> BlockFile[SlabTuple]:
    """Combine the slab-files of adjacent child slabs and the span events into the parent's slab-file.

    Each child slab keeps its latest tuple and the total weight of span events currently
    covering it. For every distinct y the child tuples and span events at that y are applied,
    and the heaviest child intervals are joined with equally heavy neighbours that touch them
    across a shared slab bound; the leftmost result is emitted.

    Args:
        slab_files: The child slab-files, ordered left to right and partitioning ``slab``.
        spanning: The y-sorted span events of the children.
        slab: The parent slab.

    Returns:
        The closed slab-file of the parent.

    Raises:
        ValueError: When the child slabs do not partition ``slab``.
    """
    slabs = [sf.slab for sf in slab_files]
    if not slabs or slabs[0].x_lo != slab.x_lo or slabs[-1].x_hi != slab.x_hi:
        raise ValueError(f"Child slabs {slabs} do not cover {slab}.")
    for left, right in zip(slabs, slabs[1:]):
        if left.x_hi != right.x_lo:
            raise ValueError(f"Child slabs {left} and {right} are not adjacent.")
    store = spanning.store
    count = len(slabs)
    base = [SlabTuple(-math.inf, s.x_lo, s.x_hi, 0.0) for s in slabs]
    up_sum = [0.0] * count
    streams = [_tagged(-1, spanning.scan())]
    streams.extend(_tagged(k, sf.file.scan()) for k, sf in enumerate(slab_files))

    out = store.create(TUPLE_CODEC, "merged")
    for y, batch in itertools.groupby(merge(*streams, key=lambda item: item[0]), key=lambda item: item[0]):
        for _, k, record in batch:
            if isinstance(record, SpanEvent):
                delta = _signed(record.kind, record.w)
                for i in range(record.slab_from, record.slab_to + 1):
                    up_sum[i] += delta
            else:
                base[k] = record
        effective = [base[i].sum + up_sum[i] for i in range(count)]
        best = max(effective)
        floor = _floor(best)
        first = next(i for i in range(count) if effective[i] >= floor)
        x1, x2 = base[first].x1, base[first].x2
        cur = first
        while (
            cur + 1 < count
            and x2 == slabs[cur].x_hi
            and not slabs[cur + 1].edge_at_lo
            and effective[cur + 1] >= floor
            and base[cur + 1].x1 == slabs[cur + 1].x_lo
        ):
            cur += 1
            x2 = base[cur].x2
        out.append(SlabTuple(y, x1, x2, _clean(best)))
    return out.close()


def _edges_at_lo(edges: BlockFile[EdgeRecord], slab: Slab) -> bool:
    if not slab.edge_at_lo or not edges.length:
        return False
    # Edges are x-sorted, so the first and last decide.
    first = edges.read_block(0)[0]
    last = edges.read_block(edges.num_blocks - 1)[-1]
    return first.x == last.x == slab.x_lo


def _covering_sweep(events: BlockFile[RectEvent], slab: Slab) -> t.Iterator[SlabTuple]:
    """Stream the tuples of a slab whose every piece spans it, as a running sum per distinct y."""
    total = 0.0
    for y, batch in itertools.groupby(events.scan(), key=attrgetter("y")):
        for event in batch:
            total += _signed(event.kind, event.w)
        yield SlabTuple(float(y), slab.x_lo, slab.x_hi, _clean(total))


def exact_maxrs(
    events: BlockFile[RectEvent],
    edges: BlockFile[EdgeRecord],
    slab: Slab = WHOLE_PLANE,
    trace: t.Optional[SweepTrace] = None,
    depth: int = 0,
) -> BlockFile[SlabTuple]:
    """Recursively solve a sub-problem into its slab-file.

    Sub-problems with at most ``M`` events are loaded and swept in memory; larger ones are
    divided, solved per child and merged. A slab whose edges all lie on its flagged left bound
    is covered by every piece and is swept in one streaming pass. Input files are left in
    place; intermediate files are removed.

    Args:
        events: The y-sorted events of the slab.
        edges: The x-sorted original vertical edges of the slab.
        slab: The slab solved.
        trace: Optional collector of per-node instrumentation.
        depth: Recursion depth of this node.

    Returns:
        The slab-file, holding at most one tuple per event.

    Raises:
        RuntimeError: When the slab-file outgrows its event count.
    """
    store = events.store
    if events.length <= store.config.M:
        with store.tracker.holding(records=events.length):
            loaded = list(events.scan())
            result = plane_sweep(loaded, slab, store)
        children_count = 0
    elif _edges_at_lo(edges, slab):
        result = store.from_records(TUPLE_CODEC, _covering_sweep(events, slab), "covered")
        children_count = 0
    else:
        children, spanning = divide(events, edges, slab)
        slab_files = []
        for child in children:
            solved = exact_maxrs(child.events, child.edges, child.slab, trace, depth + 1)
            slab_files.append(SlabFile(solved, child.slab))
            child.events.remove()
            child.edges.remove()
        result = merge_sweep(slab_files, spanning, slab)
        for sf in slab_files:
            sf.file.remove()
        spanning.remove()
        children_count = len(children)
    if result.length > events.length:
        raise RuntimeError(f"Slab-file of {result.length} tuples outgrew {events.length} events in {slab}.")
    logger.debug("Solved %s at depth %d: %d events, %d tuples", slab, depth, events.length, result.length)
    if trace is not None:
        node = NodeTrace(depth, events.length, events.length // 2, result.length, children_count, not children_count)
        trace.record(node)
    return result


def _inside(lo: float, hi: float) -> float:
    if math.isfinite(lo) and math.isfinite(hi):
        return (lo + hi) / 2
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def extract_max_region(s: BlockFile[SlabTuple]) -> t.Tuple[MaxRegion, Point]:
    """Find the heaviest tuple of a slab-file and the open region above it.

    Ties go to the lowest y. When the maximum is 0 the whole plane qualifies and the origin is
    returned.

    Args:
        s: A closed slab-file.

    Returns:
        The max-region and its centre point. A side left unbounded by the last tuple puts the point
        one unit inside its finite end.

    Raises:
        EmptyInputError: When the slab-file holds no tuple.
    """
    best: t.Optional[SlabTuple] = None
    next_y = math.inf
    pending = False
    for row in s.scan():
        if pending:
            next_y = row.y
            pending = False
        if best is None or row.sum > best.sum:
            best = row
            next_y = math.inf
            pending = True
    if best is None:
        raise EmptyInputError(f"Slab-file {s.name} holds no tuples.")
    if best.sum <= 0:
        return _EMPTY_REGION, Point(0.0, 0.0)
    region = MaxRegion(best.x1, best.x2, best.y, next_y, best.sum)
    return region, Point(_inside(best.x1, best.x2), _inside(best.y, next_y))


def maxrs(
    objects: BlockFile[WeightedObject], d1: float, d2: float, trace: t.Optional[SweepTrace] = None
) -> MaxRSAnswer:
    """Answer a MaxRS query: where to centre a ``d1 x d2`` rectangle to cover the most weight.

    Args:
        objects: Closed block file of weighted objects.
        d1: Width of the query rectangle.
        d2: Height of the query rectangle.
        trace: Optional collector of per-node instrumentation.

    Returns:
        The answer with the block transfers of the sorting and sweeping phases.

    Examples:
        >>> from maxrs.datasets import OBJECT_CODEC
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.exact import maxrs
        >>> from maxrs.geometry import WeightedObject
        >>> store = BlockStore(EMConfig.create(2, 8))
        >>> objects = store.from_records(OBJECT_CODEC, [WeightedObject(1.0, 1.0, 5.0)])
        >>> answer = maxrs(objects, 2, 2)
        >>> answer.point, answer.value
        (Point(x=1.0, y=1.0), 5.0)
    """
    start = objects.store.io_snapshot()
    events, edges = build_inputs(objects, d1, d2)
    return _solve_sorted(events, edges, start, trace)


def maxrs_of_rects(
    rects: t.Iterable[WeightedRect], store: BlockStore, trace: t.Optional[SweepTrace] = None
) -> MaxRSAnswer:
    """Find the point covered by the heaviest set of open rectangles, streamed once into ``store``.

    Examples:
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.exact import maxrs_of_rects
        >>> from maxrs.geometry import WeightedRect
        >>> rects = [WeightedRect(0.0, 4.0, 0.0, 4.0, 1.0), WeightedRect(2.0, 6.0, 2.0, 6.0, 2.0)]
        >>> answer = maxrs_of_rects(rects, BlockStore(EMConfig.create(2, 8)))
        >>> answer.point, answer.value
        (Point(x=3.0, y=3.0), 3.0)
    """
    start = store.io_snapshot()
    problem = build_rect_inputs(rects, store)
    return _solve_sorted(problem.events, problem.edges, start, trace)


def _solve_sorted(
    events: BlockFile[RectEvent], edges: BlockFile[EdgeRecord], start: IOStats, trace: t.Optional[SweepTrace]
) -> MaxRSAnswer:
    store = events.store
    sorted_at = store.io_snapshot()
    result = exact_maxrs(events, edges, WHOLE_PLANE, trace)
    if result.length:
        region, point = extract_max_region(result)
    else:
        region, point = _EMPTY_REGION, Point(0.0, 0.0)
    finished = store.io_snapshot()
    for f in (events, edges, result):
        f.remove()
    return MaxRSAnswer(point, region.sum, region, sorted_at.since(start), finished.since(sorted_at))
