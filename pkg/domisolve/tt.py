"""
Transposition table for boolean Domineering results.

Keys are Zobrist hashes of the canonical (symmetry reduced) occupancy. The
low ``index_bits`` of a key select a bucket, the remaining high bits are kept
as verification bits.

>>> table = TranspositionTable(TTConfig(index_bits=10))
>>> table.store(0x1234_5678_9abc, Player.VERTICAL, work=7)
>>> table.probe(0x1234_5678_9abc).result
<Player.VERTICAL: 'V'>
>>> table.probe(0x1234_5678_9abc ^ (1 << 10)) is None
True
"""

from dataclasses import dataclass
from typing import NamedTuple
import enum
import logging

import numpy as np

from domisolve.board import CAPACITY, Player, canonical, iter_bits

logger = logging.getLogger(__name__)

#: Seed of the published Zobrist basis; node counts are reported for it.
DEFAULT_SEED = 20150614

MASK64 = (1 << 64) - 1
WORK_CAP = (1 << 32) - 1


class Scheme(enum.Enum):
    DEEP = 'deep'
    TWOBIG = 'twobig'


@dataclass(frozen=True)
class TTConfig:
    index_bits: int = 22
    scheme: Scheme = Scheme.DEEP
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not 10 <= self.index_bits <= 30:
            raise ValueError("index_bits must lie in [10, 30], got {}"
                             .format(self.index_bits))
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class TTEntry(NamedTuple):
    verify: int
    result: Player
    work: int


class ZobristBasis(object):
    """
    One random 64-bit value per cell of the solver capacity, plus the value
    XORed in when Horizontal is to move.
    """

    __slots__ = ('seed', 'cells', 'side')

    def __init__(self, seed, cells, side):
        self.seed = seed
        self.cells = cells
        self.side = side

    def __len__(self):
        return len(self.cells) + 1

    def occupancy_hash(self, occupied):
        cells = self.cells
        value = 0
        for index in iter_bits(occupied):
            value ^= cells[index]
        return value

    def geometry_salt(self, dims):
        # keeps keys of different board sizes apart, including m x n / n x m
        return (_rotl(self.cells[dims.rows - 1], 17)
                ^ _rotl(self.cells[dims.cols - 1], 41))

    def side_value(self, to_move):
        return self.side if to_move is Player.HORIZONTAL else 0


def _rotl(value, shift):
    return ((value << shift) | (value >> (64 - shift))) & MASK64


_bases = {}


def zobrist_init(seed=DEFAULT_SEED):
    """
    Deterministic Zobrist basis for ``seed``; repeated calls share one
    instance.
    """
    basis = _bases.get(seed)
    if basis is None:
        rng = np.random.default_rng(seed)
        values = rng.integers(np.iinfo(np.uint64).max, size=CAPACITY + 1,
                              dtype=np.uint64, endpoint=True).tolist()
        basis = _bases[seed] = ZobristBasis(seed, tuple(values[:CAPACITY]),
                                            values[CAPACITY])
    return basis


def tt_hash(pos, to_move, basis=None):
    """
    Key of ``(pos, to_move)``; every symmetry image of ``pos`` gets the same
    key.
    """
    if basis is None:
        basis = zobrist_init()
    canon, _ = canonical(pos)
    return (basis.occupancy_hash(canon.occupied)
            ^ basis.geometry_salt(pos.dims)
            ^ basis.side_value(to_move))


class TranspositionTable(object):
    """
    Fixed size table of proven results.

    With the Deep scheme every bucket holds one entry, replaced when the
    incoming result took at least as much work. With TwoBig a bucket holds
    two entries and the newest result is always stored, over the entry that
    took less work.
    """

    def __init__(self, config=None):
        self.config = config or TTConfig()
        self.index_bits = self.config.index_bits
        self.mask = (1 << self.index_bits) - 1
        self.two_slots = self.config.scheme is Scheme.TWOBIG
        size = 1 << self.index_bits
        self.slots = [None] * (2 * size if self.two_slots else size)
        self.probes = self.hits = self.stores = 0
        logger.debug("transposition table: 2^%d buckets, %s scheme",
                     self.index_bits, self.config.scheme.value)

    def probe(self, key):
        self.probes += 1
        verify = key >> self.index_bits
        if self.two_slots:
            base = (key & self.mask) << 1
            for entry in (self.slots[base], self.slots[base + 1]):
                if entry is not None and entry.verify == verify:
                    self.hits += 1
                    return entry
            return None
        entry = self.slots[key & self.mask]
        if entry is not None and entry.verify == verify:
            self.hits += 1
            return entry
        return None

    def store(self, key, result, work):
        self.stores += 1
        verify = key >> self.index_bits
        entry = TTEntry(verify, result, min(work, WORK_CAP))
        slots = self.slots
        if not self.two_slots:
            index = key & self.mask
            current = slots[index]
            if current is None or entry.work >= current.work:
                slots[index] = entry
            return

        base = (key & self.mask) << 1
        first, second = slots[base], slots[base + 1]
        if first is not None and first.verify == verify:
            slots[base] = entry
        elif second is not None and second.verify == verify:
            slots[base + 1] = entry
        elif first is None:
            slots[base] = entry
        elif second is not None and first.work < second.work:
            slots[base] = entry
        else:
            slots[base + 1] = entry

    def bucket(self, key):
        """Entries currently held by the bucket of ``key``."""
        if self.two_slots:
            base = (key & self.mask) << 1
            return [self.slots[base], self.slots[base + 1]]
        return [self.slots[key & self.mask]]

    def __len__(self):
        return sum(entry is not None for entry in self.slots)
