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
Scenarios, traffic generators and the controllers issuing them
"""

import dataclasses
import json
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Any, Callable, Deque, Dict, List, Optional, Set, Tuple

import numpy as np

from .devices import KINDS, Role, Transaction
from .kernel import Clock, Kernel
from .model import (
    ControllerModel,
    JsonData,
    PeripheralKind,
    PeripheralModel,
    ScenarioError,
    SocBoundError,
    Topology,
    TransactionKind,
    check_keys,
    parse_int,
)
from .schema import SCENARIO_DOCUMENT_KEYS, SCENARIO_KEYS, WORD_BYTES, WORKLOAD_KEYS
from .topology import loads_json

__all__ = [
    "Mode",
    "KindMix",
    "AddressPattern",
    "Workload",
    "Scenario",
    "Request",
    "AddressGenerator",
    "Controller",
    "parse_scenario",
    "load_scenario",
    "serialize_scenario",
    "validate_scenario",
    "filler_count",
]

logger = logging.getLogger("socbound.traffic")


class Mode(Enum):
    ISOLATION = "isolation"
    SATURATION = "saturation"
    INTERFERENCE = "interference"
    IDLE = "idle"


class KindMix(Enum):
    READ = "read"
    WRITE = "write"
    MIXED = "mixed"


class AddressPattern(Enum):
    SEQUENTIAL = "sequential"
    HIT_LOOP = "hit_loop"
    COLD_MISS = "cold_miss"
    CONFLICT_EVICT = "conflict_evict"


def _parse_enum(cls: Any, value: Any, where: str) -> Any:
    try:
        return cls(value)
    except ValueError:
        choices = "|".join(x.value for x in cls)
        raise ScenarioError(f"{where}: invalid value {value!r} (expected {choices})")


def _parse_beta(value: Any, where: str) -> Tuple[int, ...]:
    if isinstance(value, dict):
        data = check_keys(value, (["uniform"], []), where)
        if not isinstance(data["uniform"], list) or not data["uniform"]:
            raise ScenarioError(f"{where}.uniform: expected a non-empty list")
        result = tuple(parse_int(x, f"{where}.uniform[]") for x in data["uniform"])
    else:
        result = (parse_int(value, where),)
    if min(result) < 1:
        raise ScenarioError(f"{where}: burst lengths must be at least 1")
    return result


@dataclass(frozen=True)
class Workload:
    mode: Mode
    count: int = 0
    beta: Tuple[int, ...] = (1,)
    kind: KindMix = KindMix.READ
    target: Optional[str] = None
    pattern: AddressPattern = AddressPattern.SEQUENTIAL
    phi: Optional[int] = None

    @property
    def bounded(self) -> bool:
        "Issues a fixed number of transactions"
        return self.mode in (Mode.ISOLATION, Mode.SATURATION)

    @classmethod
    def from_dict(cls, data: Any, where: str) -> "Workload":
        data = check_keys(data, WORKLOAD_KEYS, where)
        phi = parse_int(data["phi"], f"{where}.phi") if "phi" in data else None
        return Workload(
            mode=_parse_enum(Mode, data["mode"], f"{where}.mode"),
            count=parse_int(data.get("count", 0), f"{where}.count"),
            beta=_parse_beta(data.get("beta", 1), f"{where}.beta"),
            kind=_parse_enum(KindMix, data.get("kind", "read"), f"{where}.kind"),
            target=data.get("target"),
            pattern=_parse_enum(AddressPattern, data.get("pattern", "sequential"), f"{where}.pattern"),
            phi=phi,
        )

    def to_dict(self) -> JsonData:
        data: JsonData = {"mode": self.mode.value}
        if self.mode == Mode.IDLE:
            return data
        data["count"] = self.count
        data["beta"] = self.beta[0] if len(self.beta) == 1 else {"uniform": list(self.beta)}
        data["kind"] = self.kind.value
        data["target"] = self.target
        data["pattern"] = self.pattern.value
        if self.phi is not None:
            data["phi"] = self.phi
        return data


@dataclass(frozen=True)
class Scenario:
    observed: str
    workloads: Tuple[Tuple[str, Workload], ...]
    seed: Optional[int] = None

    def workload(self, controller: str) -> Workload:
        for id, workload in self.workloads:
            if id == controller:
                return workload
        return Workload(mode=Mode.IDLE)

    def with_count(self, count: int) -> "Scenario":
        "Replace the transaction count of every bounded workload"
        workloads = tuple(
            (id, dataclasses.replace(x, count=count) if x.bounded else x) for id, x in self.workloads
        )
        return Scenario(observed=self.observed, workloads=workloads, seed=self.seed)

    @classmethod
    def from_dict(cls, data: Any) -> "Scenario":
        data = check_keys(data, SCENARIO_DOCUMENT_KEYS, "document")
        data = check_keys(data["scenario"], SCENARIO_KEYS, "scenario")
        controllers = data["controllers"]
        if not isinstance(controllers, dict):
            raise ScenarioError("scenario.controllers: expected an object")
        workloads = tuple((id, Workload.from_dict(x, f"scenario.controllers[{id}]")) for id, x in controllers.items())
        seed = parse_int(data["seed"], "scenario.seed") if "seed" in data else None
        return Scenario(observed=str(data["observed"]), workloads=workloads, seed=seed)

    def to_dict(self) -> JsonData:
        scenario: JsonData = {"observed": self.observed}
        if self.seed is not None:
            scenario["seed"] = self.seed
        scenario["controllers"] = dict((id, x.to_dict()) for id, x in self.workloads)
        return {"scenario": scenario}


def parse_scenario(text: str) -> Scenario:
    try:
        return Scenario.from_dict(loads_json(text))
    except ScenarioError:
        raise
    except SocBoundError as ex:
        raise ScenarioError(str(ex))


def load_scenario(filename: Path) -> Scenario:
    with Path(filename).open("r") as f:
        return parse_scenario(f.read())


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(s.to_dict(), indent=2)


def validate_scenario(t: Topology, s: Scenario) -> None:
    "Check the scenario references against a topology, raise ScenarioError"
    known = set(x.id for x in t.controllers)
    if s.observed not in known:
        raise ScenarioError(f"observed controller '{s.observed}' not in topology")
    for id, workload in s.workloads:
        where = f"scenario.controllers[{id}]"
        if id not in known:
            raise ScenarioError(f"{where}: unknown controller")
        if workload.mode == Mode.IDLE:
            continue
        if workload.target is None:
            raise ScenarioError(f"{where}: missing target")
        peripheral = next((x for x in t.peripherals if x.id == workload.target), None)
        if peripheral is None:
            raise ScenarioError(f"{where}: unknown target peripheral '{workload.target}'")
        if peripheral.address is None:
            raise ScenarioError(f"{where}: target peripheral '{workload.target}' is not mapped")
        if workload.count < 0:
            raise ScenarioError(f"{where}: count must not be negative")
        if workload.phi is not None and workload.phi < 1:
            raise ScenarioError(f"{where}: phi must be at least 1")
        if peripheral.kind == PeripheralKind.MAIN_MEMORY and peripheral.address.size < 3 * peripheral.set_count * (
            peripheral.line_width * peripheral.dw_axi // 8
        ):
            raise ScenarioError(f"{where}: target '{peripheral.id}' too small for its cache geometry")
    observed = s.workload(s.observed)
    if observed.mode not in (Mode.ISOLATION, Mode.SATURATION):
        raise ScenarioError(f"observed controller '{s.observed}' must be in isolation or saturation mode")


def filler_count(way_count: int) -> int:
    """
    Fillers of the other kind issued before each observed transaction

    With fresh tags in every access, the LRU victim of an access is the
    access way_count positions earlier in the same set. Blocks of a
    fillers plus one observed access never align on way_count when
    a + 1 does not divide it.
    """
    a = 1
    while way_count % (a + 1) == 0:
        a += 1
    return a


@dataclass(frozen=True)
class Request:
    kind: TransactionKind
    beta: int
    address: int
    role: Role = Role.MAIN


class AddressGenerator:
    """
    Addresses of one controller inside its target

    Each controller works in its own slice of the target; for a main
    memory the slice is a range of cache sets.
    """

    def __init__(self, peripheral: PeripheralModel, workload: Workload, index: int, controller_count: int) -> None:
        self.peripheral = peripheral
        self.workload = workload
        self.base = peripheral.address.base  # type: ignore
        self.size = peripheral.address.size  # type: ignore
        self.memory = peripheral.kind == PeripheralKind.MAIN_MEMORY
        self.pattern = workload.pattern
        if not self.memory and self.pattern != AddressPattern.SEQUENTIAL:
            logger.debug("pattern %s ignored for target %s", self.pattern.value, peripheral.id)
            self.pattern = AddressPattern.SEQUENTIAL
        self._pointer = 0
        if self.memory:
            lw = peripheral.line_width
            self.line_bytes = lw * peripheral.dw_axi // 8
            self.set_offset = index * (peripheral.set_count // controller_count)
            self.max_tags = self.size // (peripheral.set_count * self.line_bytes)
            self._tag = 0
            self.footprint_beta = -(-max(workload.beta) // lw) * lw
            total_lines = self.size // self.line_bytes
            self.slice_base = index * (total_lines // controller_count)
            self.slice_size = max(1, total_lines // controller_count)
        else:
            slice_bytes = self.size // controller_count // WORD_BYTES * WORD_BYTES
            self.slice_base = self.base + index * slice_bytes
            self.slice_size = max(1, slice_bytes // WORD_BYTES)

    def _line_address(self, line: int) -> int:
        return self.base + line * self.line_bytes

    def _fresh(self) -> int:
        "Address of a line never used before in the controller sets"
        self._tag = self._tag % (self.max_tags - 2) + 1
        return self._line_address(self._tag * self.peripheral.set_count + self.set_offset)

    def prelude(self) -> List[Request]:
        if self.pattern == AddressPattern.HIT_LOOP:
            return [Request(TransactionKind.READ, self.footprint_beta, self._line_address(self.set_offset), Role.WARMUP)]
        elif self.pattern == AddressPattern.CONFLICT_EVICT:
            return [
                Request(TransactionKind.WRITE, self.footprint_beta, self._fresh(), Role.WARMUP)
                for _ in range(self.peripheral.way_count)
            ]
        return []

    def next(self, kind: TransactionKind, beta: int) -> List[Request]:
        "Fillers followed by the requested transaction"
        if self.peripheral.kind == PeripheralKind.IO and beta > 1:
            logger.debug("burst length clamped to 1 for IO target %s", self.peripheral.id)
            beta = 1
        if self.pattern == AddressPattern.SEQUENTIAL:
            return [Request(kind, beta, self._sequential(beta))]
        elif self.pattern == AddressPattern.HIT_LOOP:
            return [Request(kind, beta, self._line_address(self.set_offset))]
        fillers = 0
        if self.pattern == AddressPattern.COLD_MISS and kind == TransactionKind.WRITE:
            fillers = filler_count(self.peripheral.way_count)
        elif self.pattern == AddressPattern.CONFLICT_EVICT and kind == TransactionKind.READ:
            fillers = filler_count(self.peripheral.way_count)
        result = [Request(kind.other, beta, self._fresh(), Role.FILLER) for _ in range(fillers)]
        return result + [Request(kind, beta, self._fresh())]

    def _sequential(self, beta: int) -> int:
        if self.memory:
            lines = -(-beta // self.peripheral.line_width)
            if self._pointer + lines > self.slice_size:
                self._pointer = 0
            address = self._line_address(self.slice_base + self._pointer)
            self._pointer += lines
            return address
        if self._pointer + beta > self.slice_size:
            self._pointer = 0
        address = self.slice_base + self._pointer * WORD_BYTES
        self._pointer += beta
        return address


class Controller:
    """
    Traffic generator behind a controller manager port

    Requests are issued in order, at most one per cycle and one
    presented per channel. Isolation workloads keep one transaction in
    flight, the others up to the outstanding limit of each kind.
    """

    def __init__(
        self,
        kernel: Kernel,
        model: ControllerModel,
        clock: Clock,
        workload: Workload,
        generator: AddressGenerator,
        rng: np.random.Generator,
        new_transaction: Callable[..., Transaction],
    ) -> None:
        self.kernel = kernel
        self.id = model.id
        self.model = model
        self.clock = clock
        self.workload = workload
        self.generator = generator
        self.rng = rng
        self.first_hop = None  # type: ignore
        self.on_barrier: Callable[["Controller"], None] = lambda x: None
        self.on_finished: Callable[["Controller"], None] = lambda x: None
        self._new_transaction = new_transaction
        self._pending: Deque[Request] = deque()
        self._remaining: Optional[int] = workload.count if workload.bounded else None
        self._in_flight: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)
        self._presenting: Dict[TransactionKind, bool] = dict((k, False) for k in KINDS)
        self._last_issue: Optional[int] = None
        self._scheduled: Set[int] = set()
        self.phase = "idle"
        self.finished = False
        self.max_in_flight: Dict[TransactionKind, int] = dict((k, 0) for k in KINDS)

    @property
    def bounded(self) -> bool:
        return self.workload.bounded

    @property
    def in_flight(self) -> int:
        return sum(self._in_flight.values())

    def phi(self, kind: TransactionKind) -> int:
        if self.workload.mode == Mode.ISOLATION:
            return 1
        return self.workload.phi if self.workload.phi is not None else self.model.phi(kind)

    def set_count(self, count: int) -> None:
        self.workload = dataclasses.replace(self.workload, count=count)
        self._remaining = count

    def start(self) -> None:
        self.phase = "prelude"
        self._pending.extend(self.generator.prelude())
        if not self._pending:
            self.phase = "barrier"
            self.on_barrier(self)
        else:
            self._wake(0)

    def release_barrier(self, time: int) -> None:
        self.phase = "main"
        if not self._check_finished():
            self._wake(time)

    def stop(self) -> None:
        "Stop issuing, the transactions in flight drain"
        self._remaining = 0
        self._pending.clear()
        self._check_finished()

    def _wake(self, time: int) -> None:
        edge = self.clock.edge_at_or_after(max(time, self.kernel.now))
        if edge in self._scheduled:
            return
        self._scheduled.add(edge)
        self.kernel.schedule(edge, self.id, self._issue)

    def _next_request(self) -> Optional[Request]:
        if not self._pending and self.phase == "main" and (self._remaining is None or self._remaining > 0):
            if self.workload.kind == KindMix.MIXED:
                kind = KINDS[int(self.rng.integers(2))]
            else:
                kind = TransactionKind(self.workload.kind.value)
            betas = self.workload.beta
            beta = betas[int(self.rng.integers(len(betas)))] if len(betas) > 1 else betas[0]
            self._pending.extend(self.generator.next(kind, beta))
            if self._remaining is not None:
                self._remaining -= 1
        return self._pending[0] if self._pending else None

    def _issue(self) -> None:
        now = self.kernel.now
        self._scheduled.discard(now)
        if self.phase not in ("prelude", "main"):
            return
        request = self._next_request()
        if request is None:
            return
        kind = request.kind
        one_at_a_time = self.workload.mode == Mode.ISOLATION or self.phase == "prelude"
        if one_at_a_time and self.in_flight:
            return
        if self._presenting[kind] or self._in_flight[kind] >= self.phi(kind):
            return
        if self._last_issue is not None and now < self._last_issue + self.clock.period:
            self._wake(self._last_issue + self.clock.period)
            return
        self._pending.popleft()
        txn = self._new_transaction(kind=kind, beta=request.beta, issuer=self.id, address=request.address, role=request.role)
        txn.issued = now
        self._last_issue = now
        self._presenting[kind] = True
        self._in_flight[kind] += 1
        self.max_in_flight[kind] = max(self.max_in_flight[kind], self._in_flight[kind])
        self.first_hop.offer(txn, now, partial(self._accepted, txn))
        if not one_at_a_time:
            self._wake(now + self.clock.period)

    def _accepted(self, txn: Transaction, time: int) -> None:
        txn.accepted = time
        self._presenting[txn.kind] = False
        self._wake(time)

    def respond(self, txn: Transaction, time: int) -> None:
        "Last R beat or B handshake at the manager port"
        txn.completed = self.clock.edge_at_or_after(time)
        self._in_flight[txn.kind] -= 1
        if self.phase == "prelude" and not self._pending and not self.in_flight:
            self.phase = "barrier"
            self.on_barrier(self)
            return
        if not self._check_finished():
            self._wake(txn.completed + (self.clock.period if self.workload.mode == Mode.ISOLATION else 0))

    def _check_finished(self) -> bool:
        if self.finished or self.phase != "main":
            return self.finished
        if self._remaining == 0 and not self._pending and not self.in_flight:
            self.finished = True
            self.phase = "finished"
            self.on_finished(self)
        return self.finished
