"""Test for the exact MaxRS distribution sweep."""

import math
import random

import numpy as np
import pytest
from maxrs import exact
from maxrs.datasets import Distribution, GenSpec, WeightMode, generate
from maxrs.emstore import EMConfig
from maxrs.exact import EventKind, RectEvent, Slab, SlabFile, SlabTuple, SpanEvent, SweepTrace
from maxrs.geometry import Point, WeightedObject, WeightedRect, location_weight, range_sum
from maxrs.oracles import brute_maxrs

# Twelve unit rectangles whose edges split into the slabs (-inf, 10), [10, 20), [20, 30), [30, inf)
# for m=4: S spans the second slab, Q and U cross the third bound.
WORKED_RECTS = [
    WeightedRect(2, 6, 2, 6),  # A
    WeightedRect(2, 8, 4, 6),  # B
    WeightedRect(8, 25, 2, 6),  # S
    WeightedRect(1, 5, 6, 7),  # D
    WeightedRect(12, 16, 3, 5),  # P
    WeightedRect(13, 18, 4, 8),  # Q2
    WeightedRect(19, 23, 8, 9),  # V
    WeightedRect(27, 33, 0, 3),  # Q
    WeightedRect(31, 36, 1, 2),  # R2
    WeightedRect(21, 24, 8, 9),  # W
    WeightedRect(29, 38, 9, 10),  # U
    WeightedRect(34, 39, 10, 11),  # T
]

EM_CONFIGS = [(4, 16, 2), (8, 32, 2), (8, 64, 4), (16, 128, 4)]


def _as_float(rects):
    return [WeightedRect(*map(float, r)) for r in rects]


def _solve(rects, store, trace=None):
    problem = exact.build_rect_inputs(_as_float(rects), store)
    return exact.exact_maxrs(problem.events, problem.edges, problem.slab, trace)


def _depth_bound(n, config):
    if 2 * n <= config.M:
        return 0
    return math.ceil(math.log(2 * n / config.M, config.m)) + 1


def _strip_max(rects, y_lo, y_hi):
    """Largest location-weight in the strip between two consecutive h-lines."""
    xs = sorted({x for r in rects for x in (r.x1, r.x2)})
    y = (y_lo + y_hi) / 2
    return max((location_weight(rects, Point((a + b) / 2, y)) for a, b in zip(xs, xs[1:])), default=0)


def _random_rects(seed, count, extent=50, max_weight=3):
    rng = random.Random(seed)
    rects = []
    for _ in range(count):
        x, y = rng.randint(0, extent), rng.randint(0, extent)
        width, height = rng.randint(1, extent // 3), rng.randint(1, extent // 3)
        weight = float(rng.randint(1, max_weight))
        rects.append(WeightedRect(float(x), float(x + width), float(y), float(y + height), weight))
    return rects


def test_build_inputs_single_object(make_store, object_file):
    store = make_store(B=2, M=8)
    events, edges = exact.build_inputs(object_file(store, [WeightedObject(0.0, 0.0, 1.0)]), 2, 2)
    assert list(events.scan()) == [
        RectEvent(-1.0, EventKind.BOTTOM, -1.0, 1.0, 1.0),
        RectEvent(1.0, EventKind.TOP, -1.0, 1.0, 1.0),
    ]
    assert [e.x for e in edges.scan()] == [-1.0, 1.0]


def test_build_inputs_sorted(make_store, object_file, random_objects):
    store = make_store(B=8, M=64)
    objects = random_objects(5, 1000, extent=10000, max_weight=9)
    events, edges = exact.build_inputs(object_file(store, objects), 30, 20)
    rects = [exact.rect_of_object(o, 30, 20) for o in objects]
    expected_events = sorted((e for r in rects for e in exact.events_of_rect(r)), key=lambda e: e.y)
    assert len(events) == 2000
    assert len(edges) == 2000
    assert list(events.scan()) == expected_events
    assert [e.x for e in edges.scan()] == sorted(x for r in rects for x in (r.x1, r.x2))


def test_build_inputs_empty(make_store, object_file):
    store = make_store()
    events, edges = exact.build_inputs(object_file(store, []), 2, 2)
    assert len(events) == 0
    assert len(edges) == 0


@pytest.mark.parametrize("size", [0, -1, math.inf])
def test_build_inputs_bad_size(size, make_store, object_file):
    store = make_store()
    with pytest.raises(ValueError):
        exact.build_inputs(object_file(store, []), size, 2)


def test_worked_example_division(make_store):
    store = make_store(B=2, M=16, m=4)
    problem = exact.build_rect_inputs(_as_float(WORKED_RECTS), store)
    children, spanning = exact.divide(problem.events, problem.edges, problem.slab)
    bounds = [-math.inf, 10.0, 20.0, 30.0, math.inf]
    assert [c.slab for c in children] == [Slab(lo, hi) for lo, hi in zip(bounds, bounds[1:])]
    assert [len(c.events) for c in children] == [8, 6, 10, 8]
    assert [len(c.edges) for c in children] == [7, 5, 6, 6]
    assert list(spanning.scan()) == [
        SpanEvent(2.0, EventKind.BOTTOM, 1, 1, 1.0),
        SpanEvent(6.0, EventKind.TOP, 1, 1, 1.0),
    ]
    # S keeps its original left edge in the first slab and its right edge in the third.
    assert RectEvent(2.0, EventKind.BOTTOM, 8.0, 10.0, 1.0) in list(children[0].events.scan())
    assert RectEvent(2.0, EventKind.BOTTOM, 20.0, 25.0, 1.0) in list(children[2].events.scan())


def test_worked_example_first_slab(make_store):
    store = make_store(B=2, M=16, m=4)
    problem = exact.build_rect_inputs(_as_float(WORKED_RECTS), store)
    children, _ = exact.divide(problem.events, problem.edges, problem.slab)
    first = children[0]
    tuples = list(exact.plane_sweep(list(first.events.scan()), first.slab, store).scan())
    assert tuples == [
        SlabTuple(2.0, 2.0, 6.0, 1.0),
        SlabTuple(4.0, 2.0, 6.0, 2.0),
        SlabTuple(6.0, 1.0, 5.0, 1.0),
        SlabTuple(7.0, -math.inf, 10.0, 0.0),
    ]


def test_worked_example_merge(make_store):
    store = make_store(B=2, M=16, m=4)
    trace = SweepTrace()
    merged = list(_solve(WORKED_RECTS, store, trace).scan())
    assert [t.y for t in merged] == [float(y) for y in range(12)]
    assert merged[0] == SlabTuple(0.0, 27.0, 33.0, 1.0)
    assert merged[1] == SlabTuple(1.0, 31.0, 33.0, 2.0)
    assert merged[4] == SlabTuple(4.0, 13.0, 16.0, 3.0)
    assert max(t.sum for t in merged) == 3.0
    assert merged[-1] == SlabTuple(11.0, -math.inf, math.inf, 0.0)
    assert trace.max_depth == 1
    assert [node.base for node in trace.nodes] == [True, True, True, True, False]


def test_worked_example_region(make_store):
    store = make_store(B=2, M=16, m=4)
    region, point = exact.extract_max_region(_solve(WORKED_RECTS, store))
    assert region == exact.MaxRegion(13.0, 16.0, 4.0, 5.0, 3.0)
    assert point == Point(14.5, 4.5)
    assert location_weight(WORKED_RECTS, point) == 3


def test_divide_rect_inside_one_slab(make_store):
    store = make_store(B=2, M=8, m=2)
    rects = [(0, 1, 0, 1, 1), (2, 3, 0, 1, 1), (4, 5, 0, 1, 1), (6, 7, 0, 1, 1)]
    problem = exact.build_rect_inputs(_as_float(rects), store)
    children, spanning = exact.divide(problem.events, problem.edges, problem.slab)
    assert len(spanning) == 0
    assert [len(c.events) for c in children] == [4, 4]
    assert children[0].slab.x_hi == 3.5


def test_divide_conserves_mass(make_store):
    store = make_store(B=4, M=24, m=4)
    rects = _random_rects(17, 200, extent=1000, max_weight=5)
    problem = exact.build_rect_inputs(rects, store)
    children, spanning = exact.divide(problem.events, problem.edges, problem.slab)
    sign = {EventKind.BOTTOM: -1.0, EventKind.TOP: 1.0}
    parent = sum((r.x2 - r.x1) * (r.y2 - r.y1) * r.w for r in rects)
    pieces = sum(sign[e.kind] * (e.x2 - e.x1) * e.y * e.w for c in children for e in c.events.scan())
    widths = [c.slab.x_hi - c.slab.x_lo for c in children]
    spans = sum(sign[s.kind] * sum(widths[s.slab_from : s.slab_to + 1]) * s.y * s.w for s in spanning.scan())
    assert pieces + spans == pytest.approx(parent)
    assert sum(len(c.edges) for c in children) == 400
    for child in children:
        ys = [e.y for e in child.events.scan()]
        assert ys == sorted(ys)
        assert all(child.slab.x_lo <= e.x < child.slab.x_hi for e in child.edges.scan())


def test_divide_duplicate_edges(make_store):
    store = make_store(B=2, M=8, m=2)
    rects = [(0, 5, float(i), float(i + 1), 1) for i in range(6)]
    problem = exact.build_rect_inputs(_as_float(rects), store)
    children, _ = exact.divide(problem.events, problem.edges, problem.slab)
    assert [c.slab for c in children] == [Slab(-math.inf, 2.5), Slab(2.5, math.inf)]
    assert [len(c.edges) for c in children] == [6, 6]


def test_divide_single_edge_value(make_store):
    store = make_store(B=2, M=8, m=2)
    events = store.from_records(exact.EVENT_CODEC, [RectEvent(0.0, 0, 3.0, 9.0, 1.0), RectEvent(1.0, 1, 3.0, 9.0, 1.0)])
    edges = store.from_records(exact.EDGE_CODEC, [exact.EdgeRecord(3.0), exact.EdgeRecord(3.0)])
    children, spanning = exact.divide(events, edges, Slab(0.0, 9.0))
    assert [c.slab for c in children] == [Slab(0.0, 3.0), Slab(3.0, 9.0, True)]
    assert [len(c.events) for c in children] == [0, 0]
    assert list(spanning.scan()) == [SpanEvent(0.0, 0, 1, 1, 1.0), SpanEvent(1.0, 1, 1, 1, 1.0)]


def test_plane_sweep_single_rect():
    events = exact.events_of_rect(WeightedRect(0.0, 2.0, 0.0, 2.0))
    assert list(exact.sweep_tuples(events, exact.WHOLE_PLANE)) == [
        SlabTuple(0.0, 0.0, 2.0, 1.0),
        SlabTuple(2.0, -math.inf, math.inf, 0.0),
    ]


def test_plane_sweep_touching_rects_stay_apart():
    rects = [WeightedRect(0.0, 2.0, 0.0, 2.0), WeightedRect(2.0, 4.0, 0.0, 2.0)]
    events = sorted((e for r in rects for e in exact.events_of_rect(r)), key=lambda e: e.y)
    first = next(iter(exact.sweep_tuples(events, exact.WHOLE_PLANE)))
    assert first == SlabTuple(0.0, 0.0, 2.0, 1.0)


def test_plane_sweep_unsorted():
    events = list(reversed(exact.events_of_rect(WeightedRect(0.0, 2.0, 0.0, 2.0))))
    with pytest.raises(ValueError):
        list(exact.sweep_tuples(events, exact.WHOLE_PLANE))


def test_plane_sweep_outside_slab():
    events = exact.events_of_rect(WeightedRect(0.0, 2.0, 0.0, 2.0))
    with pytest.raises(ValueError):
        list(exact.sweep_tuples(events, Slab(1.0, 5.0)))


@pytest.mark.parametrize("seed", range(100))
def test_plane_sweep_against_grid(seed):
    rects = _random_rects(seed, random.Random(seed).randint(1, 50))
    events = sorted((e for r in rects for e in exact.events_of_rect(r)), key=lambda e: e.y)
    tuples = list(exact.sweep_tuples(events, exact.WHOLE_PLANE))
    assert len(tuples) == len({e.y for e in events})
    for row, above in zip(tuples, tuples[1:]):
        assert row.sum == _strip_max(rects, row.y, above.y)
        if row.sum:
            midpoint = Point((row.x1 + row.x2) / 2, (row.y + above.y) / 2)
            assert location_weight(rects, midpoint) == row.sum
    assert tuples[-1].sum == 0


def test_merge_sweep_zero_tuples(make_store):
    store = make_store(B=2, M=16, m=3)
    slabs = [Slab(-math.inf, 0.0), Slab(0.0, 5.0), Slab(5.0, math.inf)]
    files = [
        SlabFile(store.from_records(exact.TUPLE_CODEC, [SlabTuple(-math.inf, s.x_lo, s.x_hi, 0.0)]), s) for s in slabs
    ]
    spanning = store.create(exact.SPAN_CODEC).close()
    merged = exact.merge_sweep(files, spanning, exact.WHOLE_PLANE)
    assert list(merged.scan()) == [SlabTuple(-math.inf, -math.inf, math.inf, 0.0)]


def test_merge_sweep_spanning_only(make_store):
    store = make_store(B=2, M=16, m=3)
    slabs = [Slab(-math.inf, 0.0), Slab(0.0, 5.0), Slab(5.0, math.inf)]
    files = [SlabFile(store.create(exact.TUPLE_CODEC).close(), s) for s in slabs]
    spanning = store.from_records(exact.SPAN_CODEC, [SpanEvent(1.0, 0, 1, 1, 2.0), SpanEvent(3.0, 1, 1, 1, 2.0)])
    merged = list(exact.merge_sweep(files, spanning, exact.WHOLE_PLANE).scan())
    assert merged == [SlabTuple(1.0, 0.0, 5.0, 2.0), SlabTuple(3.0, -math.inf, math.inf, 0.0)]


merge_sweep_exceptions = [
    {"sent": [Slab(-math.inf, 0.0), Slab(-1.0, math.inf)]},
    {"sent": [Slab(-math.inf, 0.0), Slab(1.0, math.inf)]},
    {"sent": [Slab(0.0, 1.0), Slab(1.0, math.inf)]},
    {"sent": []},
]


@pytest.mark.parametrize("data", merge_sweep_exceptions)
def test_merge_sweep_exceptions(data, make_store):
    store = make_store(B=2, M=16, m=4)
    files = [SlabFile(store.create(exact.TUPLE_CODEC).close(), s) for s in data["sent"]]
    spanning = store.create(exact.SPAN_CODEC).close()
    with pytest.raises(ValueError):
        exact.merge_sweep(files, spanning, exact.WHOLE_PLANE)


@pytest.mark.parametrize("seed", range(100))
def test_merge_sweep_against_oracle(seed, make_store):
    rng = random.Random(seed)
    B, M, m = rng.choice([(2, 8, 2), (2, 12, 3), (2, 12, 4)])
    store = make_store(B=B, M=M, m=m)
    rects = _random_rects(seed, rng.randint(1, 60))
    tuples = list(_solve(rects, store).scan())
    best = max(row.sum for row in tuples)
    ys = sorted({y for r in rects for y in (r.y1, r.y2)})
    assert best == max(_strip_max(rects, lo, hi) for lo, hi in zip(ys, ys[1:]))


@pytest.mark.parametrize("seed", range(20))
def test_slab_decomposition(seed, make_store):
    store = make_store(B=2, M=12, m=4)
    rects = _random_rects(seed, 40)
    problem = exact.build_rect_inputs(rects, store)
    children, spanning = exact.divide(problem.events, problem.edges, problem.slab)
    local = [list(exact.sweep_tuples(list(c.events.scan()), c.slab)) for c in children]
    spans = list(spanning.scan())
    ys = sorted({y for r in rects for y in (r.y1, r.y2)})
    for lo, hi in zip(ys, ys[1:]):
        best = 0.0
        for k, rows in enumerate(local):
            current = [row.sum for row in rows if row.y <= lo]
            base = current[-1] if current else 0.0
            active = [s for s in spans if s.y <= lo and s.slab_from <= k <= s.slab_to]
            up = sum(s.w if s.kind == EventKind.BOTTOM else -s.w for s in active)
            best = max(best, base + up)
        assert best == _strip_max(rects, lo, hi)


def test_exact_maxrs_fits_in_memory(make_store):
    store = make_store(B=4, M=64)
    rects = _random_rects(3, 20)
    problem = exact.build_rect_inputs(rects, store)
    trace = SweepTrace()
    solved = list(exact.exact_maxrs(problem.events, problem.edges, exact.WHOLE_PLANE, trace).scan())
    events = list(problem.events.scan())
    assert solved == list(exact.sweep_tuples(events, exact.WHOLE_PLANE))
    assert trace.max_depth == 0


def test_extract_max_region_single_rect(make_store):
    store = make_store()
    rows = [SlabTuple(0.0, 0.0, 2.0, 5.0), SlabTuple(2.0, -math.inf, math.inf, 0.0)]
    tuples = store.from_records(exact.TUPLE_CODEC, rows)
    region, point = exact.extract_max_region(tuples)
    assert region == exact.MaxRegion(0.0, 2.0, 0.0, 2.0, 5.0)
    assert point == Point(1.0, 1.0)


def test_extract_max_region_lowest_tie(make_store):
    store = make_store()
    rows = [
        SlabTuple(0.0, 0.0, 2.0, 2.0),
        SlabTuple(1.0, 5.0, 6.0, 1.0),
        SlabTuple(3.0, 7.0, 9.0, 2.0),
        SlabTuple(4.0, 0.0, 1.0, 0.0),
    ]
    region, _ = exact.extract_max_region(store.from_records(exact.TUPLE_CODEC, rows))
    assert region == exact.MaxRegion(0.0, 2.0, 0.0, 1.0, 2.0)


def test_extract_max_region_zero(make_store):
    store = make_store()
    tuples = store.from_records(exact.TUPLE_CODEC, [SlabTuple(1.0, -math.inf, math.inf, 0.0)])
    region, point = exact.extract_max_region(tuples)
    assert region.sum == 0
    assert point == Point(0.0, 0.0)


def test_extract_max_region_empty(make_store):
    store = make_store()
    with pytest.raises(exact.EmptyInputError):
        exact.extract_max_region(store.create(exact.TUPLE_CODEC).close())


@pytest.mark.parametrize("seed", range(200))
def test_exact_maxrs_against_oracle(seed, make_store):
    rng = random.Random(seed)
    B, M, m = rng.choice(EM_CONFIGS)
    store = make_store(B=B, M=M, m=m)
    extent = 1000.0
    spec = GenSpec(
        n=rng.randint(0, 300),
        extent=extent,
        distribution=rng.choice(list(Distribution)),
        weight_mode=rng.choice(list(WeightMode)),
        seed=seed,
    )
    side = extent / rng.choice([100, 20, 5])
    objects = generate(spec, store)
    records = list(objects.scan())
    trace = SweepTrace()
    answer = exact.maxrs(objects, side, side, trace)
    assert answer.value == brute_maxrs(records, side, side).value
    assert range_sum(records, answer.point, side, side) == answer.value
    assert all(node.tuples <= 2 * node.rects for node in trace.nodes)
    assert trace.max_depth <= _depth_bound(spec.n, store.config)
    assert store.tracker.high_water_records <= M
    assert store.tracker.high_water_buffers <= m + 2
    assert store.tracker.buffers == 0


def test_exact_maxrs_large(make_store, object_file):
    store = make_store(B=10, M=200)
    rng = random.Random(42)
    records = [WeightedObject(rng.uniform(0, 20000), rng.uniform(0, 20000), 1.0) for _ in range(5000)]
    trace = SweepTrace()
    answer = exact.maxrs(object_file(store, records), 80.0, 80.0, trace)
    assert answer.value == brute_maxrs(records, 80.0, 80.0).value
    assert abs(trace.max_depth - math.ceil(math.log(2 * 5000 / 200, store.config.m))) <= 1


def test_maxrs_empty(make_store, object_file):
    store = make_store()
    answer = exact.maxrs(object_file(store, []), 2.0, 2.0)
    assert answer.value == 0
    assert answer.point == Point(0.0, 0.0)


def test_maxrs_io_breakdown(make_store, object_file, random_objects):
    store = make_store(B=4, M=32)
    objects = object_file(store, random_objects(8, 200, extent=500))
    before = store.io_snapshot()
    answer = exact.maxrs(objects, 20.0, 20.0)
    assert answer.io_sort.total > 0
    assert answer.io_sweep.total > 0
    assert answer.io_total == store.io_snapshot().since(before).total


@pytest.mark.parametrize("n", [1000, 4000, 16000])
def test_sweep_io_bound(n, make_store, object_file):
    store = make_store(B=8, M=128)
    rng = random.Random(n)
    extent = 4.0 * n
    records = [WeightedObject(rng.uniform(0, extent), rng.uniform(0, extent), 1.0) for _ in range(n)]
    answer = exact.maxrs(object_file(store, records), extent / 250, extent / 250)
    m = store.config.m
    assert answer.io_sweep.total <= 12 * (2 * n / 8) * (1 + math.ceil(math.log(4 * n / 128, m)))


def test_sweep_io_trend(make_store, object_file):
    def formula(n, m):
        return (2 * n / 8) * (1 + math.ceil(math.log(4 * n / 128, m)))

    m = EMConfig.create(8, 128).m
    measured = {}
    for n in (1000, 16000):
        store = make_store(B=8, M=128)
        rng = random.Random(n)
        extent = 4.0 * n
        records = [WeightedObject(rng.uniform(0, extent), rng.uniform(0, extent), 1.0) for _ in range(n)]
        measured[n] = exact.maxrs(object_file(store, records), extent / 250, extent / 250).io_sweep.total
    assert measured[16000] / measured[1000] <= 1.5 * formula(16000, m) / formula(1000, m)


def test_repeated_runs_identical(make_store, object_file, random_objects):
    answers = []
    for _ in range(2):
        store = make_store(B=4, M=32)
        answers.append(exact.maxrs(object_file(store, random_objects(2, 150, extent=300, max_weight=4)), 25.0, 10.0))
    assert answers[0] == answers[1]


def test_merge_sweep_reads_every_slab_file(make_store, object_file):
    store = make_store(B=1, M=4, m=2)
    records = [WeightedObject(2.0, 1.0), WeightedObject(1.0, 2.0), WeightedObject(1.0, 0.0)]
    answer = exact.maxrs(object_file(store, records), 2.0, 2.0)
    assert answer.value == brute_maxrs(records, 2.0, 2.0).value == 2.0
    assert range_sum(records, answer.point, 2.0, 2.0) == 2.0


nearest_gap_divisions = [
    {"sent": [0.0] * 4 + [1.0] * 5 + [2.0] * 3, "received": ([Slab(-math.inf, 0.5), Slab(0.5, math.inf)], [4, 8])},
    {"sent": [0.0] * 4 + [1.0] * 4 + [2.0] * 4, "received": ([Slab(-math.inf, 1.5), Slab(1.5, math.inf)], [8, 4])},
    {"sent": [0.0] * 7 + [1.0] * 5, "received": ([Slab(-math.inf, 0.5), Slab(0.5, math.inf)], [7, 5])},
]


@pytest.mark.parametrize("data", nearest_gap_divisions)
def test_divide_nearest_gap(data, make_store):
    store = make_store(B=2, M=8, m=2)
    events = store.from_records(exact.EVENT_CODEC, [RectEvent(0.0, 0, 0.0, 2.0, 1.0), RectEvent(1.0, 1, 0.0, 2.0, 1.0)])
    edges = store.from_records(exact.EDGE_CODEC, [exact.EdgeRecord(x) for x in data["sent"]])
    children, _ = exact.divide(events, edges, exact.WHOLE_PLANE)
    slabs, counts = data["received"]
    assert [c.slab for c in children] == slabs
    assert [len(c.edges) for c in children] == counts


def _adjacent_columns():
    right = float(np.nextafter(1.0, 2.0)) + 0.5
    return [WeightedObject(x, float(i)) for x in (0.5, right) for i in range(6)]


def test_divide_adjacent_doubles(make_store, object_file):
    store = make_store(B=2, M=8, m=2)
    events, edges = exact.build_inputs(object_file(store, _adjacent_columns()), 1.0, 10.0)
    children, _ = exact.divide(events, edges, exact.WHOLE_PLANE)
    bound = float(np.nextafter(1.0, 2.0))
    assert [c.slab for c in children] == [Slab(-math.inf, bound), Slab(bound, math.inf, True)]
    assert [len(c.edges) for c in children] == [12, 12]


def test_exact_maxrs_adjacent_doubles(make_store, object_file):
    store = make_store(B=2, M=8, m=2)
    records = _adjacent_columns()
    trace = SweepTrace()
    answer = exact.maxrs(object_file(store, records), 1.0, 10.0, trace)
    assert answer.value == brute_maxrs(records, 1.0, 10.0).value == 6.0
    assert range_sum(records, answer.point, 1.0, 10.0) == 6.0
    assert trace.max_depth <= 4
    assert store.tracker.buffers == 0


def test_exact_maxrs_coincident_objects(make_store, object_file):
    store = make_store(B=2, M=8, m=2)
    records = [WeightedObject(3.0, 3.0, 2.0)] * 40 + [WeightedObject(9.0, 9.0, 1.0)] * 10
    trace = SweepTrace()
    answer = exact.maxrs(object_file(store, records), 4.0, 4.0, trace)
    assert answer.value == 80.0
    assert range_sum(records, answer.point, 4.0, 4.0) == 80.0
    assert trace.max_depth <= 4
    assert store.tracker.high_water_records <= 8


def test_covering_slab_streams(make_store):
    store = make_store(B=2, M=8, m=2)
    rows = [RectEvent(float(y), EventKind.BOTTOM, 3.0, 9.0, 1.0) for y in range(5)]
    rows += [RectEvent(float(y), EventKind.TOP, 3.0, 9.0, 1.0) for y in range(5, 10)]
    events = store.from_records(exact.EVENT_CODEC, rows)
    edges = store.from_records(exact.EDGE_CODEC, [exact.EdgeRecord(3.0)] * 10)
    trace = SweepTrace()
    tuples = list(exact.exact_maxrs(events, edges, Slab(3.0, 9.0, True), trace).scan())
    assert [row.sum for row in tuples] == [1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0, 0.0]
    assert all((row.x1, row.x2) == (3.0, 9.0) for row in tuples)
    assert trace.max_depth == 0


@pytest.mark.parametrize("seed", range(60))
def test_exact_maxrs_integer_grid(seed, make_store, object_file):
    rng = random.Random(seed)
    B, M, m = rng.choice(EM_CONFIGS)
    store = make_store(B=B, M=M, m=m)
    grid = rng.choice([3, 5, 10])
    records = [
        WeightedObject(float(rng.randint(0, grid)), float(rng.randint(0, grid)), float(rng.randint(1, 3)))
        for _ in range(rng.randint(1, 300))
    ]
    side = float(rng.choice([1, 2, 3]))
    trace = SweepTrace()
    answer = exact.maxrs(object_file(store, records), side, side, trace)
    assert answer.value == brute_maxrs(records, side, side).value
    assert range_sum(records, answer.point, side, side) == answer.value
    distinct = len({o.x + s * side / 2 for o in records for s in (-1, 1)})
    assert trace.max_depth <= distinct
    assert store.tracker.high_water_records <= M
    assert store.tracker.buffers == 0


def test_extract_max_region_open_above(make_store):
    store = make_store()
    rows = [SlabTuple(0.0, 0.0, 2.0, 1.0), SlabTuple(1.0, 3.0, 4.0, 0.0), SlabTuple(2.0, 5.0, 6.0, 4.0)]
    region, point = exact.extract_max_region(store.from_records(exact.TUPLE_CODEC, rows))
    assert region == exact.MaxRegion(5.0, 6.0, 2.0, math.inf, 4.0)
    assert point == Point(5.5, 3.0)


@pytest.mark.parametrize("seed", range(20))
def test_maxrs_of_rects(seed, make_store):
    store = make_store(B=2, M=12, m=3)
    rects = _random_rects(seed, 40)
    answer = exact.maxrs_of_rects(rects, store)
    ys = sorted({y for r in rects for y in (r.y1, r.y2)})
    assert answer.value == max(_strip_max(rects, lo, hi) for lo, hi in zip(ys, ys[1:]))
    assert location_weight(rects, answer.point) == answer.value
    assert answer.io_sort.total > 0
