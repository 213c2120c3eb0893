"""Used to setup fixtures to be used through tests"""
import os
import random

import pytest

from maxrs.datasets import OBJECT_CODEC
from maxrs.emstore import BlockStore, EMConfig
from maxrs.geometry import WeightedObject

MOCK_DIR = os.path.join(os.path.dirname(__file__), "mock")


@pytest.fixture
def make_store():
    """Fixture to build an in-memory block store."""

    def _method(B=4, M=16, m=None, directory=None):
        """Build a block store with a validated memory model.

        Args:
            B (int): Records per block.
            M (int): Records of memory.
            m (int): Optional fan-out.
            directory (str): Optional directory for on-disk block files.

        Returns:
            BlockStore: The store, enforcing the memory budget.
        """
        return BlockStore(EMConfig.create(B, M, m), directory)

    return _method


@pytest.fixture
def random_objects():
    """Fixture to return a seeded list of objects with integer coordinates and weights."""

    def _method(seed, n, extent=100, max_weight=1):
        """Draw ``n`` objects on the integer grid of ``[0, extent]^2``.

        Args:
            seed (int): Seed of the random source.
            n (int): Number of objects.
            extent (int): Side of the domain.
            max_weight (int): Weights are drawn from 1..max_weight.

        Returns:
            list: The objects.
        """
        rng = random.Random(seed)
        objects = []
        for _ in range(n):
            x, y = rng.randint(0, extent), rng.randint(0, extent)
            objects.append(WeightedObject(float(x), float(y), float(rng.randint(1, max_weight))))
        return objects

    return _method


@pytest.fixture
def object_file():
    """Fixture to load objects into a closed block file."""

    def _method(store, objects):
        """Write ``objects`` to a new object file of ``store``."""
        return store.from_records(OBJECT_CODEC, objects)

    return _method


@pytest.fixture
def get_text_data():
    """Fixture to return the path and text of a mock data file."""

    def _method(_file):
        """Fixture to return the text data as a string, given a file location relative to the mock folder.

        Args:
            _file (str): The location of the text file under ``tests/unit/mock``.

        Returns:
            tuple: The absolute path and the text of the file.
        """
        path = os.path.join(MOCK_DIR, _file)
        with open(path, encoding="utf-8") as file:
            data = file.read()
        return path, data

    return _method
