#!/usr/bin/env python3
#
# MIT License
#
# Copyright (c) 2024 The socbound authors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#


"""
Discrete-event kernel: a single (time, sequence) ordered event queue,
clock domains with seeded phases and named random streams.
"""

import heapq
import logging
import zlib
from typing import Any, Callable, List, NamedTuple, Optional

import numpy as np

from .model import ClockDomain

__all__ = [
    "SimEvent",
    "Kernel",
    "Clock",
    "random_stream",
    "cdc_arrival",
    "MASK64",
    "NORMAL",
    "DECISION",
]

logger = logging.getLogger("socbound.kernel")

MASK64 = (1 << 64) - 1

NORMAL = 0
DECISION = 1


class SimEvent(NamedTuple):
    time: int  # picoseconds
    priority: int
    sequence: int
    target: str
    action: Callable[..., None]
    args: Any


class Kernel:
    """
    Event scheduler

    Events with equal time are processed by priority, then in scheduling
    order. Arbitration decisions use DECISION priority so that they see
    every request presented at the same edge.
    """

    def __init__(self) -> None:
        self._queue: List[SimEvent] = []
        self._sequence = 0
        self.now = 0
        self.processed = 0

    def schedule(self, time: int, target: str, action: Callable[..., None], *args: Any) -> None:
        self._push(time, NORMAL, target, action, args)

    def schedule_decision(self, time: int, target: str, action: Callable[..., None], *args: Any) -> None:
        self._push(time, DECISION, target, action, args)

    def _push(self, time: int, priority: int, target: str, action: Callable[..., None], args: Any) -> None:
        if time < self.now:
            raise ValueError(f"event for {target} scheduled in the past ({time} < {self.now})")
        heapq.heappush(self._queue, SimEvent(time, priority, self._sequence, target, action, args))
        self._sequence += 1

    @property
    def pending(self) -> int:
        return len(self._queue)

    def peek_time(self) -> Optional[int]:
        return self._queue[0].time if self._queue else None

    def run(self, horizon: int, done: Callable[[], bool]) -> bool:
        """
        Process events up to the horizon (inclusive)

        :returns: True if `done` became true before the horizon elapsed
        """
        while self._queue and not done():
            if self._queue[0].time > horizon:
                break
            event = heapq.heappop(self._queue)
            self.now = event.time
            event.action(*event.args)
            self.processed += 1
        return done()


class Clock:
    "Edges of a clock domain: phase + k * period"

    def __init__(self, domain: ClockDomain, phase: int = 0) -> None:
        self.name = domain.name
        self.period = domain.period.to_ps()
        if not 0 <= phase < self.period:
            raise ValueError(f"phase of clock {self.name} out of range: {phase}")
        self.phase = phase

    def edge_at_or_after(self, time: int) -> int:
        if time <= self.phase:
            return self.phase
        k = -(-(time - self.phase) // self.period)
        return self.phase + k * self.period

    def edge_after(self, time: int) -> int:
        return self.edge_at_or_after(time + 1)

    def __repr__(self) -> str:
        return f"Clock({self.name}, period={self.period}, phase={self.phase})"


def random_stream(seed: int, name: str) -> np.random.Generator:
    """
    Independent random stream of a named component

    The stream is derived from the 64-bit seed and the CRC-32 of the
    component name, so it does not depend on construction order.
    """
    sequence = np.random.SeedSequence(entropy=seed & MASK64, spawn_key=(zlib.crc32(name.encode("utf-8")),))
    return np.random.Generator(np.random.PCG64DXSM(sequence))


def cdc_arrival(tx: Clock, rx: Clock, time: int) -> int:
    """
    Time a word written at a TX edge becomes visible at the RX side

    One TX cycle to write, then the pointer is sampled on the first RX
    edge strictly after the write and the word leaves three RX cycles later.
    """
    written = tx.edge_at_or_after(time) + tx.period
    return rx.edge_after(written) + 3 * rx.period
