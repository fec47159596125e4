"""
Fair-coin bit sources
Seeded, replay and queue-backed sources, each counting the bits it hands out
"""

import sys
import os
from abc import ABC, abstractmethod
from collections import deque

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.source.tape_io import parse_tape
from src.utils.exceptions import TapeExhausted
from src.utils.settings import load_settings

_BLOCK_BYTES = load_settings('sampling')['bit_source']['block_bytes']


def derive_seed(master, index=None):
    """
    Seed sequence of chunk `index` under a master seed

    The child key is (index,), the same key SeedSequence.spawn would give
    the index-th child, so chunk streams never depend on how many workers ran.
    """
    spawn_key = () if index is None else (int(index),)
    return np.random.SeedSequence(int(master), spawn_key=spawn_key)


class BitSource(ABC):
    """
    Stream of i.i.d. Bernoulli(1/2) bits

    `consumed` counts every bit handed out by next_bit and never decreases.
    Instances are single-owner: samplers take exclusive use for the call.
    """

    def __init__(self):
        self.consumed = 0

    def next_bit(self):
        bit = self._draw()
        self.consumed += 1
        return bit

    def next_bits(self, count):
        return [self.next_bit() for _ in range(count)]

    @abstractmethod
    def _draw(self):
        """Produce the next bit without touching the counter"""


class SeededBitSource(BitSource):
    """
    Deterministic pseudorandom source

    Seed mapping: SeedSequence(seed, spawn_key=(stream,)) feeds a PCG64
    generator; bytes from Generator.bytes are unpacked MSB-first. The same
    (seed, stream) pair always yields the same bit stream.
    """

    def __init__(self, seed, stream=None, block_bytes=None):
        super().__init__()
        self.seed = int(seed)
        self.stream = stream
        sequence = derive_seed(self.seed, stream)
        self._rng = np.random.Generator(np.random.PCG64(sequence))
        self._block_bytes = block_bytes or _BLOCK_BYTES
        self._buffer = []
        self._cursor = 0

    def _draw(self):
        if self._cursor >= len(self._buffer):
            block = np.frombuffer(self._rng.bytes(self._block_bytes), dtype=np.uint8)
            self._buffer = np.unpackbits(block).tolist()
            self._cursor = 0
        bit = self._buffer[self._cursor]
        self._cursor += 1
        return bit


class ReplaySource(BitSource):
    """Emits the bits of a finite tape in order; reading past the end raises TapeExhausted"""

    def __init__(self, tape):
        super().__init__()
        self.tape = parse_tape(tape) if isinstance(tape, str) else [int(b) for b in tape]
        self.cursor = 0

    @property
    def remaining(self):
        return len(self.tape) - self.cursor

    def _draw(self):
        if self.cursor >= len(self.tape):
            raise TapeExhausted(f"Tape exhausted after {len(self.tape)} bits")
        bit = self.tape[self.cursor]
        self.cursor += 1
        return bit


class RecordingSource(BitSource):
    """Wraps another source and keeps every bit it forwards"""

    def __init__(self, inner):
        super().__init__()
        self.inner = inner
        self.record = []

    def _draw(self):
        bit = self.inner.next_bit()
        self.record.append(bit)
        return bit


class RecycleQueue:
    """Unbounded FIFO of recovered bits"""

    def __init__(self):
        self._fifo = deque()
        self.max_depth = 0

    def __len__(self):
        return len(self._fifo)

    def push(self, bits):
        self._fifo.extend(int(b) for b in bits)
        if len(self._fifo) > self.max_depth:
            self.max_depth = len(self._fifo)

    def pop(self):
        return self._fifo.popleft()


class FetchBitSource(BitSource):
    """
    Queue-first source used by batch generation

    `consumed` counts fetches (queue hits included), `fresh_consumed` counts
    only the bits drawn from the fallback source.
    """

    def __init__(self, fallback, queue=None):
        super().__init__()
        self.fallback = fallback
        self.queue = queue if queue is not None else RecycleQueue()
        self.fresh_consumed = 0

    def _draw(self):
        if len(self.queue):
            return self.queue.pop()
        bit = self.fallback.next_bit()
        self.fresh_consumed += 1
        return bit


def next_bit(source):
    """Draw one bit from any source"""
    return source.next_bit()


def fetch_bit(source):
    """Queue head if the queue is nonempty, otherwise a fresh fallback bit"""
    return source.next_bit()


def push_recycled(queue, bits):
    """Append recovered bits to the queue in order"""
    queue.push(bits)


# Test the sources
if __name__ == "__main__":
    source = SeededBitSource(0x1)
    bits = source.next_bits(64)
    print(''.join(str(b) for b in bits), source.consumed)
