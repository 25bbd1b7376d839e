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
Behavioral models of the interconnect and of the peripherals

Stages pass requests forward with offer(txn, time, release): the
downstream stage calls release(time) at the request handshake, which
frees the upstream slot. Responses travel back with respond(txn, time).
"""

import logging
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Deque, Dict, List, NamedTuple, Optional, Set, Tuple

from .components import (
    HMC_BACKEND_CYCLES,
    HRAM_COMMAND_CYCLES,
)
from .kernel import Clock, Kernel, cdc_arrival
from .model import (
    BridgeKind,
    BridgeModel,
    MemoryCase,
    PeripheralModel,
    PeripheralTimingModel,
    TransactionKind,
)
from .schema import WORD_BYTES

__all__ = [
    "KINDS",
    "Role",
    "HopRecord",
    "Transaction",
    "Bridge",
    "CdcBridge",
    "FixedBridge",
    "Arbiter",
    "Crossbar",
    "Peripheral",
    "PipelineConfig",
    "BankPorts",
    "PipelinedPeripheral",
    "MainMemory",
    "LineAccess",
    "spm_pipeline",
    "io_pipeline",
    "generic_pipeline",
    "make_bridge",
]

logger = logging.getLogger("socbound.devices")

KINDS = (TransactionKind.READ, TransactionKind.WRITE)

Release = Callable[[int], None]


class Role(Enum):
    MAIN = "main"
    WARMUP = "warmup"
    FILLER = "filler"


class HopRecord(NamedTuple):
    bridge: str
    direction: str  # request or response
    enter: int
    exit: int

    @property
    def delay(self) -> int:
        return self.exit - self.enter


@dataclass(eq=False)
class Transaction:
    id: int
    kind: TransactionKind
    beta: int
    issuer: str
    address: int
    role: Role = Role.MAIN
    target: Optional[str] = None
    issued: Optional[int] = None
    accepted: Optional[int] = None
    completed: Optional[int] = None
    # crossbar and peripheral monitors
    xbar_in: Optional[int] = None
    xbar_grant: Optional[int] = None
    periph_arrival: Optional[int] = None
    periph_done: Optional[int] = None
    xbar_out: Optional[int] = None
    memory_case: Optional[MemoryCase] = None
    hops: List[HopRecord] = field(default_factory=list)

    @property
    def service(self) -> int:
        if self.issued is None or self.completed is None:
            raise ValueError(f"transaction {self.id} is not complete")
        return self.completed - self.issued

    @property
    def xbar_traversal(self) -> Optional[int]:
        "Arbitration wait plus request and response crossings"
        if None in (self.xbar_in, self.periph_arrival, self.periph_done, self.xbar_out):
            return None
        return (self.periph_arrival - self.xbar_in) + (self.xbar_out - self.periph_done)  # type: ignore


# Bridges


class _Entry:
    __slots__ = ("txn", "visible", "offered")

    def __init__(self, txn: Transaction, visible: int) -> None:
        self.txn = txn
        self.visible = visible
        self.offered = False


class Bridge:
    """
    Bridge on the path between a controller and the crossbar

    Each channel (AR, AW) is an in-order queue; the head is presented to
    the downstream stage once visible at the receiving side.
    """

    def __init__(self, kernel: Kernel, model: BridgeModel, upstream_clock: Clock, downstream_clock: Clock) -> None:
        self.kernel = kernel
        self.id = model.id
        self.model = model
        self.upstream_clock = upstream_clock
        self.downstream_clock = downstream_clock
        self.downstream = None  # type: ignore
        self.upstream = None  # type: ignore
        self._fifo: Dict[TransactionKind, Deque[_Entry]] = dict((k, deque()) for k in KINDS)
        self._blocked: Dict[TransactionKind, Optional[Tuple[Transaction, Release]]] = dict((k, None) for k in KINDS)
        self.max_occupancy: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)

    @property
    def capacity(self) -> Optional[int]:
        return None

    def forward_time(self, time: int, kind: TransactionKind) -> int:
        raise NotImplementedError

    def backward_time(self, time: int, kind: TransactionKind) -> int:
        raise NotImplementedError

    def offer(self, txn: Transaction, time: int, release: Release) -> None:
        if self.capacity is not None and len(self._fifo[txn.kind]) >= self.capacity:
            self._blocked[txn.kind] = (txn, release)
        else:
            self._push(txn, time, release)

    def _push(self, txn: Transaction, time: int, release: Release) -> None:
        release(time)
        visible = self.forward_time(time, txn.kind)
        txn.hops.append(HopRecord(self.id, "request", time, visible))
        fifo = self._fifo[txn.kind]
        fifo.append(_Entry(txn, visible))
        self.max_occupancy[txn.kind] = max(self.max_occupancy[txn.kind], len(fifo))
        self.kernel.schedule(visible, self.id, self._present, txn.kind)

    def _push_blocked(self, kind: TransactionKind) -> None:
        blocked = self._blocked[kind]
        if blocked is None:
            return
        self._blocked[kind] = None
        txn, release = blocked
        self._push(txn, self.kernel.now, release)

    def _present(self, kind: TransactionKind) -> None:
        fifo = self._fifo[kind]
        if not fifo:
            return
        head = fifo[0]
        if head.offered or head.visible > self.kernel.now:
            return
        head.offered = True
        self.downstream.offer(head.txn, self.kernel.now, partial(self._popped, kind))

    def _popped(self, kind: TransactionKind, time: int) -> None:
        fifo = self._fifo[kind]
        fifo.popleft()
        if fifo:
            self.kernel.schedule(max(time, fifo[0].visible), self.id, self._present, kind)
        if self._blocked[kind] is not None:
            self.kernel.schedule(self.upstream_clock.edge_at_or_after(time), self.id, self._push_blocked, kind)

    def respond(self, txn: Transaction, time: int) -> None:
        arrival = self.backward_time(time, txn.kind)
        txn.hops.append(HopRecord(self.id, "response", time, arrival))
        self.kernel.schedule(arrival, self.id, self.upstream.respond, txn, arrival)


class CdcBridge(Bridge):
    "Dual-clock FIFO, one per channel direction"

    @property
    def capacity(self) -> Optional[int]:
        return self.model.depth

    def forward_time(self, time: int, kind: TransactionKind) -> int:
        return cdc_arrival(self.upstream_clock, self.downstream_clock, time)

    def backward_time(self, time: int, kind: TransactionKind) -> int:
        return cdc_arrival(self.downstream_clock, self.upstream_clock, time)


class FixedBridge(Bridge):
    "Bridge with a fixed round-trip delay split between request and response"

    def forward_time(self, time: int, kind: TransactionKind) -> int:
        d = self.model.fixed_delay(kind).to_ps()
        return self.downstream_clock.edge_at_or_after(time + d // 2)

    def backward_time(self, time: int, kind: TransactionKind) -> int:
        d = self.model.fixed_delay(kind).to_ps()
        return self.upstream_clock.edge_at_or_after(time + d - d // 2)


def make_bridge(kernel: Kernel, model: BridgeModel, upstream_clock: Clock, downstream_clock: Clock) -> Bridge:
    if model.kind == BridgeKind.CDC:
        return CdcBridge(kernel, model, upstream_clock, downstream_clock)
    return FixedBridge(kernel, model, upstream_clock, downstream_clock)


# Crossbar


class Arbiter:
    """
    Round-robin mux of one manager port channel

    At most one grant per crossbar cycle; requests that cannot be
    accepted downstream are skipped.
    """

    def __init__(
        self,
        kernel: Kernel,
        name: str,
        clock: Clock,
        port_count: int,
        can_grant: Callable[[int, Transaction], bool],
        on_grant: Callable[[int, Transaction, int], None],
    ) -> None:
        self.kernel = kernel
        self.name = name
        self.clock = clock
        self._pending: List[Optional[Tuple[Transaction, Release]]] = [None] * port_count
        self._pointer = port_count - 1
        self._last_grant: Optional[int] = None
        self._scheduled: Set[int] = set()
        self._can_grant = can_grant
        self._on_grant = on_grant

    def offer(self, port: int, txn: Transaction, release: Release, time: int) -> None:
        self._pending[port] = (txn, release)
        self.kick(time)

    def kick(self, time: int) -> None:
        edge = self.clock.edge_at_or_after(time)
        if self._last_grant is not None and edge <= self._last_grant:
            edge = self._last_grant + self.clock.period
        if edge in self._scheduled:
            return
        self._scheduled.add(edge)
        self.kernel.schedule_decision(edge, self.name, self._arbitrate)

    def _arbitrate(self) -> None:
        now = self.kernel.now
        self._scheduled.discard(now)
        if self._last_grant == now:
            self.kick(now)
            return
        count = len(self._pending)
        for i in range(1, count + 1):
            port = (self._pointer + i) % count
            entry = self._pending[port]
            if entry is not None and self._can_grant(port, entry[0]):
                break
        else:
            return
        txn, release = entry
        self._pointer = port
        self._last_grant = now
        self._pending[port] = None
        self._on_grant(port, txn, now)
        release(now)
        if any(x is not None for x in self._pending):
            self.kick(now)


class Crossbar:
    """
    Fully-connected crossbar

    Per subordinate port demux on the address, per manager port and
    channel round-robin mux, one cycle per channel crossing and an
    in-order table of the outstanding writes of every subordinate port.
    """

    def __init__(self, kernel: Kernel, clock: Clock, d_tab: int, controllers: List[str], peripherals: Dict[str, "Peripheral"]) -> None:
        self.kernel = kernel
        self.clock = clock
        self.d_tab = d_tab
        self.peripherals = peripherals
        self.ports = dict((x, i) for i, x in enumerate(controllers))
        self.upstream: Dict[str, object] = {}
        self._w_table: Dict[str, Deque[Transaction]] = dict((x, deque()) for x in controllers)
        self._b_ready: Set[Transaction] = set()
        self._arbiters: Dict[Tuple[str, TransactionKind], Arbiter] = {}
        for pid in peripherals:
            for kind in KINDS:
                self._arbiters[(pid, kind)] = Arbiter(
                    kernel, f"xbar.{pid}.{kind}", clock, len(controllers), self._can_grant, self._on_grant
                )
        for peripheral in peripherals.values():
            peripheral.crossbar = self

    def _peripheral_at(self, txn: Transaction) -> "Peripheral":
        for peripheral in self.peripherals.values():
            if peripheral.model.address is not None and peripheral.model.address.contains(txn.address):
                return peripheral
        raise ValueError(f"transaction {txn.id}: no peripheral at 0x{txn.address:x}")

    def offer(self, txn: Transaction, time: int, release: Release) -> None:
        peripheral = self._peripheral_at(txn)
        txn.target = peripheral.id
        txn.xbar_in = self.clock.edge_at_or_after(time)
        self._arbiters[(peripheral.id, txn.kind)].offer(self.ports[txn.issuer], txn, release, time)

    def _can_grant(self, port: int, txn: Transaction) -> bool:
        if not self.peripherals[txn.target].can_accept(txn.kind):  # type: ignore
            return False
        return txn.kind == TransactionKind.READ or len(self._w_table[txn.issuer]) < self.d_tab

    def _on_grant(self, port: int, txn: Transaction, time: int) -> None:
        txn.xbar_grant = time
        peripheral = self.peripherals[txn.target]  # type: ignore
        peripheral.reserve(txn.kind)
        if txn.kind == TransactionKind.WRITE:
            self._w_table[txn.issuer].append(txn)
        txn.periph_arrival = time + self.clock.period
        self.kernel.schedule(txn.periph_arrival, peripheral.id, peripheral.arrive, txn, txn.periph_arrival)

    def respond(self, txn: Transaction, time: int) -> None:
        "Response of a peripheral, its slot is free from now on"
        self._arbiters[(txn.target, txn.kind)].kick(time)  # type: ignore
        out = self.clock.edge_at_or_after(time) + self.clock.period
        self.kernel.schedule(out, "xbar", self._deliver, txn)

    def _deliver(self, txn: Transaction) -> None:
        now = self.kernel.now
        if txn.kind == TransactionKind.READ:
            txn.xbar_out = now
            self.upstream[txn.issuer].respond(txn, now)  # type: ignore
            return
        # B responses leave in issue order
        self._b_ready.add(txn)
        table = self._w_table[txn.issuer]
        released = False
        while table and table[0] in self._b_ready:
            head = table.popleft()
            self._b_ready.discard(head)
            head.xbar_out = now
            self.upstream[head.issuer].respond(head, now)  # type: ignore
            released = True
        if released:
            for (_, kind), arbiter in self._arbiters.items():
                if kind == TransactionKind.WRITE:
                    arbiter.kick(now)


# Peripherals


class Peripheral:
    "Subordinate with one input FIFO per channel"

    def __init__(self, kernel: Kernel, model: PeripheralModel, clock: Clock) -> None:
        self.kernel = kernel
        self.id = model.id
        self.model = model
        self.clock = clock
        self.crossbar: Optional[Crossbar] = None
        self._reserved: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)
        self._outstanding: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)
        self.max_outstanding: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)

    def can_accept(self, kind: TransactionKind) -> bool:
        return self._reserved[kind] < self.model.chi(kind)

    def reserve(self, kind: TransactionKind) -> None:
        self._reserved[kind] += 1

    def arrive(self, txn: Transaction, time: int) -> None:
        self._outstanding[txn.kind] += 1
        self.max_outstanding[txn.kind] = max(self.max_outstanding[txn.kind], self._outstanding[txn.kind])
        self.accept(txn, self.clock.edge_at_or_after(time))

    def accept(self, txn: Transaction, time: int) -> None:
        raise NotImplementedError

    def complete(self, txn: Transaction) -> None:
        now = self.kernel.now
        self._outstanding[txn.kind] -= 1
        self._reserved[txn.kind] -= 1
        txn.periph_done = now
        self.crossbar.respond(txn, now)  # type: ignore


@dataclass(frozen=True)
class PipelineConfig:
    """
    Service of a FIFO-fed peripheral, in picoseconds

    A transaction spends `pre` before its data phase, one `word` per
    beat on the data port and `post` after it. With `banks` the beats
    also need the port of the bank they address.
    """

    pre_read: int
    pre_write: int
    post_read: int
    post_write: int
    word: int
    rho: int
    theta: int
    banks: int = 0

    def pre(self, kind: TransactionKind) -> int:
        return self.pre_read if kind == TransactionKind.READ else self.pre_write

    def post(self, kind: TransactionKind) -> int:
        return self.post_read if kind == TransactionKind.READ else self.post_write


def spm_pipeline(clock: Clock, bank_count: int) -> PipelineConfig:
    # read: converter 3 cycles before data, demux and response 2 after
    # write: data accepted after 2 cycles, B response 1 cycle later
    t = clock.period
    return PipelineConfig(
        pre_read=3 * t, pre_write=2 * t, post_read=2 * t, post_write=t, word=t, rho=1, theta=1, banks=bank_count
    )


def io_pipeline(clock: Clock) -> PipelineConfig:
    t = clock.period
    return PipelineConfig(pre_read=2 * t, pre_write=2 * t, post_read=t, post_write=0, word=t, rho=0, theta=0)


def generic_pipeline(timing: PeripheralTimingModel) -> PipelineConfig:
    return PipelineConfig(
        pre_read=timing.t_ctrl_read.to_ps(),
        pre_write=timing.t_ctrl_write.to_ps(),
        post_read=0,
        post_write=0,
        word=timing.t_data.to_ps(),
        rho=timing.rho,
        theta=timing.theta,
    )


class BankPorts:
    """
    Dual-port SRAM banks of the scratchpad

    Every bank has one read and one write port moving one word per cycle;
    consecutive words of a burst go to consecutive banks.
    """

    def __init__(self, bank_count: int, base: int, word: int) -> None:
        self.bank_count = bank_count
        self.base = base
        self.word = word
        self._free: Dict[Tuple[int, TransactionKind], int] = {}
        self.stalls = 0

    def bank_of(self, address: int) -> int:
        return ((address - self.base) // WORD_BYTES) % self.bank_count

    def transfer(self, address: int, beta: int, kind: TransactionKind, start: int) -> int:
        "Move the beats of a burst from start on, returns the end of the last beat"
        time = start
        bank = self.bank_of(address)
        for _ in range(beta):
            free = self._free.get((bank, kind), 0)
            if free > time:
                self.stalls += 1
                time = free
            self._free[(bank, kind)] = time + self.word
            time += self.word
            bank = (bank + 1) % self.bank_count
        return time


class _Lane:
    "Control and data resources shared by the kinds it serves"

    def __init__(self, kinds: Tuple[TransactionKind, ...]) -> None:
        self.kinds = kinds
        self.last_kind: Optional[TransactionKind] = None
        self.next_start = 0
        self.data_free = 0
        self.wakeup: Optional[int] = None


class PipelinedPeripheral(Peripheral):
    """
    SPM, IO subsystem and generic peripherals

    With theta = 1 reads and writes have independent lanes, otherwise a
    single lane alternates between them round-robin. With rho = 1 a new
    transaction enters the control pipeline every cycle, otherwise the
    lane serves one transaction at a time.
    """

    def __init__(self, kernel: Kernel, model: PeripheralModel, clock: Clock, config: PipelineConfig) -> None:
        super().__init__(kernel, model, clock)
        self.config = config
        self.banks: Optional[BankPorts] = None
        if config.banks:
            base = model.address.base if model.address is not None else 0
            self.banks = BankPorts(config.banks, base, config.word)
        if config.theta:
            lanes = [_Lane((TransactionKind.READ,)), _Lane((TransactionKind.WRITE,))]
        else:
            lanes = [_Lane(KINDS)]
        self._lanes: Dict[TransactionKind, _Lane] = dict((k, x) for x in lanes for k in x.kinds)
        self._queues: Dict[TransactionKind, Deque[Tuple[Transaction, int]]] = dict((k, deque()) for k in KINDS)

    def accept(self, txn: Transaction, time: int) -> None:
        self._queues[txn.kind].append((txn, time))
        self._wake(self._lanes[txn.kind], time)

    def _wake(self, lane: _Lane, time: int) -> None:
        time = max(time, lane.next_start, self.kernel.now)
        if lane.wakeup is not None and lane.wakeup <= time:
            return
        lane.wakeup = time
        self.kernel.schedule_decision(time, self.id, self._dispatch, lane)

    def _dispatch(self, lane: _Lane) -> None:
        now = self.kernel.now
        if lane.wakeup == now:
            lane.wakeup = None
        if now < lane.next_start:
            self._wake(lane, lane.next_start)
            return
        ready = [k for k in lane.kinds if self._queues[k] and self._queues[k][0][1] <= now]
        if not ready:
            heads = [self._queues[k][0][1] for k in lane.kinds if self._queues[k]]
            if heads:
                self._wake(lane, min(heads))
            return
        kind = ready[0]
        if len(ready) > 1 and lane.last_kind == kind:
            kind = ready[1]
        lane.last_kind = kind
        txn, _ = self._queues[kind].popleft()
        c = self.config
        if c.rho:
            lane.next_start = now + self.clock.period
            data_start = max(now + c.pre(kind), lane.data_free)
            if self.banks is not None:
                lane.data_free = self.banks.transfer(txn.address, txn.beta, kind, data_start)
            else:
                lane.data_free = data_start + txn.beta * c.word
            done = lane.data_free + c.post(kind)
        else:
            done = now + c.pre(kind) + txn.beta * c.word + c.post(kind)
            lane.next_start = self.clock.edge_at_or_after(done)
        self.kernel.schedule(done, self.id, self.complete, txn)
        if any(self._queues[k] for k in lane.kinds):
            self._wake(lane, lane.next_start)


class LineAccess(NamedTuple):
    words: int
    hit: bool
    evict_dirty: bool


class MainMemory(Peripheral):
    """
    Last-level cache in front of the HyperBUS memory controller

    Bursts are split into cache lines and admitted one per LLC cycle,
    reads and writes round-robin. Hits are pipelined; a miss refills its
    lines through the HMC front-end and the HyperRAM back-end, which serve
    one burst at a time, and blocks admission until it completes.
    """

    def __init__(self, kernel: Kernel, model: PeripheralModel, clock: Clock, llc: Clock, hmc: Clock, hram: Clock) -> None:
        super().__init__(kernel, model, clock)
        self.llc = llc
        self.hmc = hmc
        self.hram = hram
        self.word_bytes = model.dw_axi // 8
        self.line_bytes = model.line_width * self.word_bytes
        self.hram_word_cycles = -(-model.dw_axi // model.dw_hyper)
        self._sets: List["OrderedDict[int, bool]"] = [OrderedDict() for _ in range(model.set_count)]
        self._queues: Dict[TransactionKind, Deque[Tuple[Transaction, int]]] = dict((k, deque()) for k in KINDS)
        self._last_kind: Optional[TransactionKind] = None
        self._next_admit = 0
        self._blocked_until = 0
        self._wakeup: Optional[int] = None
        self._data_free: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)
        self._hmc_free = 0
        self.cases: Set[MemoryCase] = set()

    def accept(self, txn: Transaction, time: int) -> None:
        time = self.llc.edge_at_or_after(time)
        self._queues[txn.kind].append((txn, time))
        self._wake(time)

    def _wake(self, time: int) -> None:
        time = self.llc.edge_at_or_after(max(time, self._next_admit, self._blocked_until, self.kernel.now))
        if self._wakeup is not None and self._wakeup <= time:
            return
        self._wakeup = time
        self.kernel.schedule_decision(time, self.id, self._admit)

    def _admit(self) -> None:
        now = self.kernel.now
        if self._wakeup == now:
            self._wakeup = None
        if now < max(self._next_admit, self._blocked_until):
            self._wake(now)
            return
        ready = [k for k in KINDS if self._queues[k] and self._queues[k][0][1] <= now]
        if not ready:
            heads = [self._queues[k][0][1] for k in KINDS if self._queues[k]]
            if heads:
                self._wake(min(heads))
            return
        kind = ready[0]
        if len(ready) > 1 and self._last_kind == kind:
            kind = ready[1]
        self._last_kind = kind
        txn, _ = self._queues[kind].popleft()
        self._next_admit = now + self.llc.period
        lines = self.classify(txn)
        if any(x.evict_dirty for x in lines):
            txn.memory_case = MemoryCase.MISS_REFILL_EVICT
        elif not all(x.hit for x in lines):
            txn.memory_case = MemoryCase.MISS_REFILL
        else:
            txn.memory_case = MemoryCase.HIT
        self.cases.add(txn.memory_case)
        if txn.memory_case == MemoryCase.HIT:
            done = self._hit(txn, now)
        else:
            done = self._miss(txn, now, lines)
            self._blocked_until = done
        self.kernel.schedule(done, self.id, self.complete, txn)
        if any(self._queues.values()):
            self._wake(now)

    def lines_of(self, txn: Transaction) -> List[Tuple[int, int]]:
        "(line index, words) of every cache line touched by a burst"
        base = self.model.address.base if self.model.address is not None else 0
        first_word = (txn.address - base) // self.word_bytes
        lw = self.model.line_width
        result = []
        word, remaining = first_word, txn.beta
        while remaining > 0:
            line = word // lw
            words = min(remaining, lw - word % lw)
            result.append((line, words))
            word += words
            remaining -= words
        return result

    def classify(self, txn: Transaction) -> List[LineAccess]:
        "Look up and update the LRU sets, write-allocate"
        result = []
        for line, words in self.lines_of(txn):
            ways = self._sets[line % self.model.set_count]
            tag = line // self.model.set_count
            dirty = txn.kind == TransactionKind.WRITE
            if tag in ways:
                ways.move_to_end(tag)
                ways[tag] = ways[tag] or dirty
                result.append(LineAccess(words, True, False))
                continue
            evict_dirty = False
            if len(ways) >= self.model.way_count:
                _, evict_dirty = ways.popitem(last=False)
            ways[tag] = dirty
            result.append(LineAccess(words, False, evict_dirty))
        return result

    def _hit(self, txn: Transaction, start: int) -> int:
        # split, lookup, hit/miss and read/write unit before the SRAM
        data_start = max(start + 4 * self.llc.period, self._data_free[txn.kind])
        self._data_free[txn.kind] = data_start + txn.beta * self.llc.period
        return self._data_free[txn.kind] + self.llc.period

    def _hram_burst(self, request: int, kind: TransactionKind) -> int:
        "One line through the HMC front-end and back-end, returns its completion"
        fifo_out = self.hmc.edge_at_or_after(request) + self.hmc.period
        admitted = max(fifo_out, self.hmc.edge_at_or_after(self._hmc_free))
        # serializer and command converter
        command = admitted + 3 * self.hmc.period
        backend = cdc_arrival(self.hmc, self.hram, command)
        cycles = HMC_BACKEND_CYCLES + HRAM_COMMAND_CYCLES + self.model.hram_access_latency_cycles
        cycles += self.model.line_width * self.hram_word_cycles
        done = backend + cycles * self.hram.period
        if kind == TransactionKind.READ:
            done = cdc_arrival(self.hram, self.hmc, done) + self.hmc.period
        self._hmc_free = done
        return done

    def _miss(self, txn: Transaction, start: int, lines: List[LineAccess]) -> int:
        L = self.llc.period
        t0 = start + 3 * L
        for i, line in enumerate(lines):
            request = t0 + (i + 1) * L
            if line.hit:
                ready = request + L
            else:
                if line.evict_dirty:
                    self._hram_burst(request, TransactionKind.WRITE)
                ready = self.llc.edge_at_or_after(self._hram_burst(request, TransactionKind.READ)) + L
            data_start = max(ready, self._data_free[txn.kind])
            self._data_free[txn.kind] = data_start + line.words * L
        return self.llc.edge_at_or_after(self._data_free[txn.kind]) + L
