"""Simulated external memory: block files with I/O counting, a memory budget and an external merge sort.

All record transfers go through whole blocks of ``B`` records and every block read or written
is counted. Nothing outside this module touches the bytes of a block file.
"""

import heapq
import itertools
import logging
import math
import os
import struct
import typing as t
from contextlib import contextmanager

logger = logging.getLogger(__name__)

R = t.TypeVar("R", bound=t.Tuple[t.Any, ...])


class BlockRangeError(IndexError):
    """A block index past the end of a block file was requested."""


class FileStateError(RuntimeError):
    """A block file was written after it was closed, or read before it was closed."""


class MemoryBudgetExceeded(RuntimeError):
    """The tracked in-memory footprint went over the configured budget."""


class IOStats(t.NamedTuple):
    """Counts of block transfers through a block store."""

    blocks_read: int = 0
    blocks_written: int = 0

    @property
    def total(self) -> int:
        """Blocks read plus blocks written."""
        return self.blocks_read + self.blocks_written

    def since(self, earlier: "IOStats") -> "IOStats":
        """Transfers performed after the ``earlier`` snapshot was taken.

        Examples:
            >>> from maxrs.emstore import IOStats
            >>> IOStats(10, 4).since(IOStats(3, 1))
            IOStats(blocks_read=7, blocks_written=3)
        """
        return IOStats(self.blocks_read - earlier.blocks_read, self.blocks_written - earlier.blocks_written)


class EMConfig(t.NamedTuple):
    """External-memory parameters, all counted in records.

    Attributes:
        B: Records per block.
        M: Records of main memory.
        m: Fan-out used by the distribution sweep and by the merge passes of the external sort.
    """

    B: int
    M: int
    m: int

    @classmethod
    def create(cls, B: int, M: int, m: t.Optional[int] = None) -> "EMConfig":
        """Validate the parameters and derive the default fan-out ``max(2, M // B - 2)``.

        Args:
            B: Records per block.
            M: Records of main memory, at least ``2 * B``.
            m: Optional fan-out override, ``2 <= m <= max(2, M // B - 2)``.

        Returns:
            The validated configuration.

        Raises:
            ValueError: When a parameter is out of range.

        Examples:
            >>> from maxrs.emstore import EMConfig
            >>> EMConfig.create(8, 128)
            EMConfig(B=8, M=128, m=14)
            >>> EMConfig.create(4, 16)
            EMConfig(B=4, M=16, m=2)
            >>> EMConfig.create(8, 64, 4)
            EMConfig(B=8, M=64, m=4)
        """
        if not isinstance(B, int) or B < 1:
            raise ValueError(f"Block size B of {B} was not a positive integer.")
        if not isinstance(M, int) or M < 2 * B:
            raise ValueError(f"Memory size M of {M} must hold at least two blocks of {B} records.")
        ceiling = max(2, M // B - 2)
        if m is None:
            m = ceiling
        elif not isinstance(m, int) or not 2 <= m <= ceiling:
            raise ValueError(f"Fan-out m of {m} was not within [2, {ceiling}] for B={B}, M={M}.")
        return cls(B, M, m)

    @property
    def buffer_limit(self) -> int:
        """Block buffers the algorithm layer may hold at once: one per merge input plus two."""
        return self.m + 2


class RecordCodec(t.Generic[R]):
    """Fixed-size little-endian encoding of one kind of record."""

    def __init__(self, name: str, fmt: str, factory: t.Callable[..., R]):
        """Create a codec.

        Args:
            name: Short name of the record kind, used in file labels.
            fmt: ``struct`` format of one record.
            factory: Builds a record from the unpacked field values.
        """
        self.name = name
        self._struct = struct.Struct(fmt)
        self._factory = factory

    @property
    def size(self) -> int:
        """Encoded size of one record in bytes."""
        return self._struct.size

    def pack(self, records: t.Sequence[R]) -> bytes:
        """Encode records back to back."""
        return b"".join(self._struct.pack(*record) for record in records)

    def unpack(self, data: bytes) -> t.List[R]:
        """Decode a buffer holding whole records."""
        return [self._factory(*values) for values in self._struct.iter_unpack(data)]


class MemoryTracker:
    """Instrumented high-water mark of records and block buffers held by the algorithm layer."""

    def __init__(self, record_limit: t.Optional[int] = None, buffer_limit: t.Optional[int] = None):
        """Create a tracker; limits of ``None`` disable enforcement."""
        self.record_limit = record_limit
        self.buffer_limit = buffer_limit
        self.records = 0
        self.buffers = 0
        self.high_water_records = 0
        self.high_water_buffers = 0

    def acquire(self, records: int = 0, buffers: int = 0) -> None:
        """Account for records or block buffers now held in memory.

        Raises:
            MemoryBudgetExceeded: When a limit is crossed.
        """
        held_records, held_buffers = self.records + records, self.buffers + buffers
        if self.record_limit is not None and held_records > self.record_limit:
            raise MemoryBudgetExceeded(f"{held_records} records held, budget is {self.record_limit}.")
        if self.buffer_limit is not None and held_buffers > self.buffer_limit:
            raise MemoryBudgetExceeded(f"{held_buffers} block buffers held, budget is {self.buffer_limit}.")
        self.records, self.buffers = held_records, held_buffers
        self.high_water_records = max(self.high_water_records, held_records)
        self.high_water_buffers = max(self.high_water_buffers, held_buffers)

    def release(self, records: int = 0, buffers: int = 0) -> None:
        """Undo an earlier :meth:`acquire`."""
        self.records -= records
        self.buffers -= buffers

    @contextmanager
    def holding(self, records: int = 0, buffers: int = 0) -> t.Iterator[None]:
        """Hold records or buffers for the duration of a ``with`` block."""
        self.acquire(records, buffers)
        try:
            yield
        finally:
            self.release(records, buffers)


class _MemoryDisk:
    def __init__(self) -> None:
        self._data = bytearray()

    def append(self, data: bytes) -> None:
        self._data.extend(data)

    def read(self, offset: int, size: int) -> bytes:
        return bytes(self._data[offset : offset + size])

    def remove(self) -> None:
        self._data = bytearray()


class _FileDisk:
    def __init__(self, path: str) -> None:
        self.path = path
        self._handle = open(path, "w+b")  # pylint: disable=consider-using-with

    def append(self, data: bytes) -> None:
        self._handle.seek(0, os.SEEK_END)
        self._handle.write(data)

    def read(self, offset: int, size: int) -> bytes:
        self._handle.flush()
        self._handle.seek(offset)
        return self._handle.read(size)

    def remove(self) -> None:
        self._handle.close()
        if os.path.exists(self.path):
            os.remove(self.path)


class BlockFile(t.Generic[R]):
    """A sequence of fixed-size records on the simulated disk, transferred in blocks of ``B`` records.

    A block file is appended to through a one-block staging buffer until :meth:`close` is called,
    after which it can be read block by block.
    """

    def __init__(self, store: "BlockStore", codec: RecordCodec[R], disk: t.Union[_MemoryDisk, _FileDisk], name: str):
        """Create an empty writable block file; use :meth:`BlockStore.create` instead."""
        self.store = store
        self.codec = codec
        self.name = name
        self.length = 0
        self.closed = False
        self._disk = disk
        self._staging: t.List[R] = []
        store.tracker.acquire(buffers=1)

    def __len__(self) -> int:
        """Number of records in the file."""
        return self.length

    def __repr__(self) -> str:
        """Short description of the file."""
        return f"BlockFile({self.name!r}, length={self.length}, closed={self.closed})"

    @property
    def num_blocks(self) -> int:
        """Number of blocks, the last of which may be partial."""
        return math.ceil(self.length / self.store.config.B)

    def append(self, record: R) -> None:
        """Append one record through the staging buffer.

        Raises:
            FileStateError: When the file has been closed.
        """
        if self.closed:
            raise FileStateError(f"Block file {self.name} was written after close.")
        self._staging.append(record)
        self.length += 1
        if len(self._staging) == self.store.config.B:
            self._flush()

    def append_records(self, records: t.Iterable[R]) -> None:
        """Append every record of an iterable."""
        for record in records:
            self.append(record)

    def _flush(self) -> None:
        if self._staging:
            self._disk.append(self.codec.pack(self._staging))
            self.store.count_write()
            self._staging = []

    def close(self) -> "BlockFile[R]":
        """Flush any partial block and make the file readable; closing twice is a no-op."""
        if not self.closed:
            self._flush()
            self.closed = True
            self.store.tracker.release(buffers=1)
        return self

    def read_block(self, block_index: int) -> t.List[R]:
        """Read block ``block_index``, holding up to ``B`` records.

        Raises:
            FileStateError: When the file is still open for writing.
            BlockRangeError: When the index is past the last block.
        """
        if not self.closed:
            raise FileStateError(f"Block file {self.name} was read before close.")
        if not 0 <= block_index < self.num_blocks:
            raise BlockRangeError(f"Block {block_index} is out of range for {self.name} with {self.num_blocks} blocks.")
        block_records = self.store.config.B
        count = min(block_records, self.length - block_index * block_records)
        data = self._disk.read(block_index * block_records * self.codec.size, count * self.codec.size)
        self.store.count_read()
        return self.codec.unpack(data)

    def scan(self) -> t.Iterator[R]:
        """Stream every record in order, holding one block buffer while iterating."""
        with self.store.tracker.holding(buffers=1):
            for block_index in range(self.num_blocks):
                yield from self.read_block(block_index)

    def remove(self) -> None:
        """Release the underlying storage."""
        if not self.closed:
            self.store.tracker.release(buffers=1)
            self.closed = True
        self._staging = []
        self._disk.remove()
        self.length = 0


class BlockStore:
    """Factory and I/O accountant for block files.

    Files live in memory unless a ``directory`` is given, in which case each block file is a real
    file in that directory.

    Examples:
        >>> from maxrs.emstore import BlockStore, EMConfig
        >>> from maxrs.exact import EDGE_CODEC, EdgeRecord
        >>> store = BlockStore(EMConfig.create(4, 16))
        >>> edges = store.from_records(EDGE_CODEC, [EdgeRecord(float(x)) for x in range(10)])
        >>> store.io_snapshot()
        IOStats(blocks_read=0, blocks_written=3)
        >>> len(edges.read_block(2))
        2
        >>> store.io_snapshot()
        IOStats(blocks_read=1, blocks_written=3)
    """

    def __init__(self, config: EMConfig, directory: t.Optional[str] = None, enforce_budget: bool = True):
        """Create a block store.

        Args:
            config: The external-memory parameters.
            directory: Optional directory for on-disk block files.
            enforce_budget: Raise :class:`MemoryBudgetExceeded` as soon as the budget is crossed.
        """
        self.config = config
        self.directory = directory
        if enforce_budget:
            self.tracker = MemoryTracker(config.M, config.buffer_limit)
        else:
            self.tracker = MemoryTracker()
        self._blocks_read = 0
        self._blocks_written = 0
        self._counter = itertools.count()

    def count_read(self) -> None:
        """Record one block read."""
        self._blocks_read += 1

    def count_write(self) -> None:
        """Record one block written."""
        self._blocks_written += 1

    def io_snapshot(self) -> IOStats:
        """Current transfer counters."""
        return IOStats(self._blocks_read, self._blocks_written)

    def create(self, codec: RecordCodec[R], label: str = "") -> BlockFile[R]:
        """Create an empty block file open for writing."""
        name = f"{next(self._counter):06d}-{codec.name}{'-' + label if label else ''}"
        disk: t.Union[_MemoryDisk, _FileDisk]
        if self.directory is None:
            disk = _MemoryDisk()
        else:
            disk = _FileDisk(os.path.join(self.directory, f"{name}.blk"))
        return BlockFile(self, codec, disk, name)

    def from_records(self, codec: RecordCodec[R], records: t.Iterable[R], label: str = "") -> BlockFile[R]:
        """Create, fill and close a block file; the writes are counted."""
        block_file = self.create(codec, label)
        block_file.append_records(records)
        return block_file.close()


def external_sort(f: BlockFile[R], key: t.Callable[[R], t.Any]) -> BlockFile[R]:
    """Stable external merge sort of a closed block file into a new block file.

    Run formation loads at most ``M`` records at a time; merge passes combine at most ``m``
    runs, each through one block buffer, into one output buffer.

    Args:
        f: The closed input file; it is left untouched.
        key: Sort key of a record.

    Returns:
        A new closed block file holding the records in ascending key order.

    Examples:
        >>> from maxrs.emstore import BlockStore, EMConfig, external_sort
        >>> from maxrs.exact import EDGE_CODEC, EdgeRecord
        >>> store = BlockStore(EMConfig.create(2, 4))
        >>> edges = store.from_records(EDGE_CODEC, [EdgeRecord(x) for x in (5.0, 3.0, 9.0, 1.0, 7.0)])
        >>> [e.x for e in external_sort(edges, key=lambda e: e.x).scan()]
        [1.0, 3.0, 5.0, 7.0, 9.0]
    """
    store = f.store
    config = store.config
    runs: t.List[BlockFile[R]] = []
    reader = f.scan()
    while True:
        chunk = list(itertools.islice(reader, config.M))
        if not chunk:
            break
        with store.tracker.holding(records=len(chunk)):
            chunk.sort(key=key)
            runs.append(store.from_records(f.codec, chunk, "run"))
    logger.debug("Sorting %s: %d records in %d runs", f.name, f.length, len(runs))
    passes = 0
    while len(runs) > 1:
        merged: t.List[BlockFile[R]] = []
        for start in range(0, len(runs), config.m):
            group = runs[start : start + config.m]
            if len(group) == 1:
                merged.append(group[0])
                continue
            out = store.create(f.codec, "run")
            out.append_records(heapq.merge(*(run.scan() for run in group), key=key))
            merged.append(out.close())
            for run in group:
                run.remove()
        runs = merged
        passes += 1
    logger.debug("Sorted %s in %d merge passes", f.name, passes)
    if not runs:
        return store.create(f.codec, "sorted").close()
    return runs[0]
