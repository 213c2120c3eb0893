"""Test for the geometry functions."""

import math

import pytest
from maxrs import geometry
from maxrs.geometry import Point, WeightedCircle, WeightedObject, WeightedRect


rect_of_object = [
    {"sent": (WeightedObject(10, 20, 3), 4, 6), "received": WeightedRect(8, 12, 17, 23, 3)},
    {"sent": (WeightedObject(0, 0), 2, 2), "received": WeightedRect(-1, 1, -1, 1, 1)},
    {"sent": (WeightedObject(-5, 5, 0), 1, 3), "received": WeightedRect(-5.5, -4.5, 3.5, 6.5, 0)},
]


@pytest.mark.parametrize("data", rect_of_object)
def test_rect_of_object(data):
    assert geometry.rect_of_object(*data["sent"]) == data["received"]


size_exceptions = [
    {"sent": (WeightedObject(0, 0), 0, 1)},
    {"sent": (WeightedObject(0, 0), 1, -2)},
    {"sent": (WeightedObject(0, 0), math.inf, 1)},
    {"sent": (WeightedObject(0, 0), math.nan, 1)},
]


@pytest.mark.parametrize("data", size_exceptions)
def test_rect_of_object_exceptions(data):
    with pytest.raises(ValueError):
        geometry.rect_of_object(*data["sent"])


covers_rect = [
    {"sent": Point(1, 1), "received": True},
    {"sent": Point(0, 1), "received": False},
    {"sent": Point(2, 1), "received": False},
    {"sent": Point(1, 0), "received": False},
    {"sent": Point(1, 2), "received": False},
    {"sent": Point(0, 0), "received": False},
    {"sent": Point(1.999999, 0.000001), "received": True},
    {"sent": Point(3, 3), "received": False},
]


@pytest.mark.parametrize("data", covers_rect)
def test_covers_rect_is_open(data):
    assert geometry.covers_rect(WeightedRect(0, 2, 0, 2), data["sent"]) == data["received"]


covers_circle = [
    {"sent": Point(0, 0), "received": True},
    {"sent": Point(1, 0), "received": False},
    {"sent": Point(0, -1), "received": False},
    {"sent": Point(0.7, 0.7), "received": True},
    {"sent": Point(0.71, 0.71), "received": False},
]


@pytest.mark.parametrize("data", covers_circle)
def test_covers_circle_is_open(data):
    assert geometry.covers_circle(WeightedCircle(0, 0, 2), data["sent"]) == data["received"]


def test_location_weight_sums_covering_rects():
    rects = [WeightedRect(0, 4, 0, 4, 2), WeightedRect(2, 6, 2, 6, 3), WeightedRect(10, 11, 10, 11, 7)]
    assert geometry.location_weight(rects, Point(3, 3)) == 5
    assert geometry.location_weight(rects, Point(1, 1)) == 2
    assert geometry.location_weight(rects, Point(4, 3)) == 3
    assert geometry.location_weight(rects, Point(8, 8)) == 0


def test_location_weight_matches_range_sum():
    objects = [WeightedObject(1, 1, 1), WeightedObject(2, 2, 4), WeightedObject(5, 1, 2)]
    rects = [geometry.rect_of_object(o, 3, 2) for o in objects]
    for p in (Point(1.5, 1.5), Point(2, 1.5), Point(4, 1), Point(0, 0)):
        assert geometry.location_weight(rects, p) == geometry.range_sum(objects, p, 3, 2)


def test_mbr_of_circle_contains_circle():
    circle = WeightedCircle(3, -2, 4, 5)
    mbr = geometry.mbr_of_circle(circle)
    assert mbr == WeightedRect(1, 5, -4, 0, 5)
    for angle in range(0, 360, 15):
        p = Point(3 + 1.999 * math.cos(math.radians(angle)), -2 + 1.999 * math.sin(math.radians(angle)))
        assert geometry.covers_circle(circle, p)
        assert geometry.covers_rect(mbr, p)


def test_disk_sum_uses_open_disk():
    objects = [WeightedObject(0, 0, 1), WeightedObject(1, 0, 2), WeightedObject(0.5, 0.5, 4)]
    assert geometry.disk_sum(objects, Point(0, 0), 2) == 5
    assert geometry.disk_sum(objects, Point(0.5, 0), 2) == 7


check_object_exceptions = [
    {"sent": WeightedObject(math.nan, 0, 1)},
    {"sent": WeightedObject(0, math.inf, 1)},
    {"sent": WeightedObject(0, 0, -1)},
    {"sent": WeightedObject(0, 0, math.inf)},
]


@pytest.mark.parametrize("data", check_object_exceptions)
def test_check_object_exceptions(data):
    with pytest.raises(ValueError):
        geometry.check_object(data["sent"])
