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


import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, cast

from .devices import (
    Bridge,
    Crossbar,
    MainMemory,
    Peripheral,
    PipelinedPeripheral,
    Role,
    Transaction,
    generic_pipeline,
    io_pipeline,
    make_bridge,
    spm_pipeline,
)
from .duration import Duration
from .kernel import Clock, Kernel, random_stream
from .model import (
    BridgeKind,
    JsonData,
    MemoryCase,
    PeripheralKind,
    PeripheralModel,
    PeripheralTimingModel,
    SocBoundError,
    Topology,
    TransactionKind,
    UnknownIdError,
)
from .traffic import AddressGenerator, Controller, Mode, Scenario, validate_scenario

__all__ = [
    "HorizonExceeded",
    "NoMatchingRecords",
    "TraceRecord",
    "TraceStats",
    "SimInstance",
    "build_sim",
    "run",
    "max_service",
    "max_outstanding",
    "export_trace",
    "write_trace",
    "DEFAULT_HORIZON",
]

logger = logging.getLogger("socbound.simulator")

DEFAULT_HORIZON = Duration.from_ps(10**15)  # one second


class NoMatchingRecords(SocBoundError):
    pass


class HorizonExceeded(SocBoundError):
    "The horizon elapsed before every transaction completed"

    def __init__(self, stats: "TraceStats") -> None:
        super().__init__(f"horizon exceeded with {stats.incomplete} incomplete transactions")
        self.stats = stats


@dataclass(frozen=True)
class TraceRecord:
    id: int
    kind: TransactionKind
    beta: int
    issuer: str
    target: str
    issued_ps: int
    accepted_ps: int
    completed_ps: int
    role: Role = Role.MAIN
    memory_case: Optional[MemoryCase] = None
    xbar_traversal_ps: Optional[int] = None
    hops: Tuple[Tuple[str, str, int], ...] = ()  # (bridge, direction, delay)

    @property
    def service_ps(self) -> int:
        return self.completed_ps - self.issued_ps

    @classmethod
    def of(cls, txn: Transaction) -> "TraceRecord":
        return TraceRecord(
            id=txn.id,
            kind=txn.kind,
            beta=txn.beta,
            issuer=txn.issuer,
            target=txn.target or "",
            issued_ps=txn.issued,  # type: ignore
            accepted_ps=txn.accepted,  # type: ignore
            completed_ps=txn.completed,  # type: ignore
            role=txn.role,
            memory_case=txn.memory_case,
            xbar_traversal_ps=txn.xbar_traversal,
            hops=tuple((x.bridge, x.direction, x.delay) for x in txn.hops),
        )

    def to_dict(self) -> JsonData:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "beta": self.beta,
            "issuer": self.issuer,
            "target": self.target,
            "issued_ps": self.issued_ps,
            "accepted_ps": self.accepted_ps,
            "completed_ps": self.completed_ps,
        }


@dataclass(frozen=True)
class TraceStats:
    observed: str
    records: Tuple[TraceRecord, ...]
    max_service_ps: Dict[Tuple[TransactionKind, int], int]
    outstanding: Dict[str, Dict[TransactionKind, int]]
    in_flight: Dict[str, Dict[TransactionKind, int]]
    memory_cases: Dict[str, Tuple[MemoryCase, ...]]
    trace_hash: str
    incomplete: int = 0
    end_ps: int = 0
    events: int = 0
    bank_stalls: Dict[str, int] = field(default_factory=dict)

    def main_records(self, issuer: Optional[str] = None) -> List[TraceRecord]:
        issuer = issuer or self.observed
        return [x for x in self.records if x.issuer == issuer and x.role == Role.MAIN]

    def worst_case(self, peripheral: str) -> Optional[MemoryCase]:
        cases = self.memory_cases.get(peripheral)
        return MemoryCase.worst(cases) if cases else None


def export_trace(stats: TraceStats) -> Iterator[str]:
    "One line per transaction"
    for record in stats.records:
        yield json.dumps(record.to_dict())


def write_trace(stats: TraceStats, filename: Path) -> None:
    with Path(filename).open("w") as f:
        for line in export_trace(stats):
            f.write(line + "\n")


def _trace_hash(records: Tuple[TraceRecord, ...]) -> str:
    h = hashlib.sha256()
    for record in records:
        h.update(json.dumps(record.to_dict()).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


class SimInstance:
    "Behavioral models of one topology running one scenario"

    def __init__(self, t: Topology, s: Scenario, seed: int, randomize_phases: bool = True) -> None:
        self.topology = t
        self.scenario = s
        self.seed = seed
        self.kernel = Kernel()
        self.clocks: Dict[str, Clock] = {}
        for domain in t.clocks:
            phase = int(random_stream(seed, f"clock.{domain.name}").integers(domain.period.to_ps())) if randomize_phases else 0
            self.clocks[domain.name] = Clock(domain, phase)
        self.peripherals: Dict[str, Peripheral] = dict((x.id, self._peripheral(x)) for x in t.peripherals)
        self.crossbar = Crossbar(
            self.kernel,
            self.clocks[t.crossbar.clock],
            t.crossbar.d_tab,
            [x.id for x in t.controllers],
            self.peripherals,
        )
        self.transactions: List[Transaction] = []
        self.controllers: Dict[str, Controller] = {}
        self.bridges: Dict[str, Bridge] = {}
        active = [(x, s.workload(x.id)) for x in t.controllers if s.workload(x.id).mode != Mode.IDLE]
        for model, workload in active:
            generator = AddressGenerator(
                t.peripheral(workload.target),  # type: ignore
                workload,
                [x.id for x in t.controllers].index(model.id),
                len(t.controllers),
            )
            controller = Controller(
                self.kernel,
                model,
                self.clocks[model.clock],
                workload,
                generator,
                random_stream(seed, f"traffic.{model.id}"),
                self._new_transaction,
            )
            controller.on_barrier = self._barrier
            controller.on_finished = self._finished
            self._connect(controller)
            self.controllers[model.id] = controller
        self._at_barrier = 0

    def _peripheral(self, p: PeripheralModel) -> Peripheral:
        clock = self.clocks[p.clock]
        if p.kind == PeripheralKind.SPM:
            return PipelinedPeripheral(self.kernel, p, clock, spm_pipeline(clock, p.bank_count))
        elif p.kind == PeripheralKind.IO:
            return PipelinedPeripheral(self.kernel, p, clock, io_pipeline(clock))
        elif p.kind == PeripheralKind.GENERIC:
            return PipelinedPeripheral(self.kernel, p, clock, generic_pipeline(cast(PeripheralTimingModel, p.timing)))
        return MainMemory(
            self.kernel,
            p,
            clock,
            self.clocks[cast(str, p.llc_clock)],
            self.clocks[cast(str, p.hmc_clock)],
            self.clocks[cast(str, p.hram_clock)],
        )

    def _connect(self, controller: Controller) -> None:
        "Chain controller, bridges and crossbar"
        models = self.topology.controller_bridges(controller.id)
        # clock seen at the output of every bridge
        downstream: List[Clock] = []
        following = self.crossbar.clock
        for model in reversed(models):
            downstream.insert(0, self.clocks[model.rx_clock] if model.kind == BridgeKind.CDC else following)  # type: ignore
            following = self.clocks[model.tx_clock] if model.kind == BridgeKind.CDC else following  # type: ignore
        upstream_clock = controller.clock
        chain: List[Bridge] = []
        for model, clock in zip(models, downstream):
            if model.kind == BridgeKind.CDC:
                upstream_clock = self.clocks[model.tx_clock]  # type: ignore
            bridge = make_bridge(self.kernel, model, upstream_clock, clock)
            self.bridges[model.id] = bridge
            chain.append(bridge)
            upstream_clock = clock
        stages = [controller] + chain + [self.crossbar]  # type: ignore
        for up, down in zip(stages[:-1], stages[1:]):
            if up is controller:
                controller.first_hop = down
            else:
                up.downstream = down
            if down is self.crossbar:
                self.crossbar.upstream[controller.id] = up
            else:
                down.upstream = up

    def _new_transaction(self, **kwargs) -> Transaction:  # type: ignore
        txn = Transaction(id=len(self.transactions), **kwargs)
        self.transactions.append(txn)
        return txn

    def _barrier(self, controller: Controller) -> None:
        self._at_barrier += 1
        if self._at_barrier == len(self.controllers):
            now = self.kernel.now
            logger.debug("barrier released at %d ps", now)
            for x in self.controllers.values():
                x.release_barrier(now)

    def _finished(self, controller: Controller) -> None:
        if all(x.finished for x in self.controllers.values() if x.bounded):
            for x in self.controllers.values():
                if not x.bounded and not x.finished:
                    x.stop()

    def done(self) -> bool:
        return all(x.finished for x in self.controllers.values())

    def start(self) -> None:
        if all(x.workload.count == 0 for x in self.controllers.values() if x.bounded):
            for x in self.controllers.values():
                x.finished = True
            return
        for x in self.controllers.values():
            x.start()

    def stats(self) -> TraceStats:
        complete = [x for x in self.transactions if x.completed is not None]
        records = tuple(TraceRecord.of(x) for x in complete)
        observed = self.scenario.observed
        maxima: Dict[Tuple[TransactionKind, int], int] = {}
        for record in records:
            if record.issuer == observed and record.role == Role.MAIN:
                key = (record.kind, record.beta)
                maxima[key] = max(maxima.get(key, 0), record.service_ps)
        cases: Dict[str, List[MemoryCase]] = {}
        for record in records:
            if record.memory_case is not None and record.role != Role.WARMUP:
                cases.setdefault(record.target, [])
                if record.memory_case not in cases[record.target]:
                    cases[record.target].append(record.memory_case)
        return TraceStats(
            observed=observed,
            records=records,
            max_service_ps=maxima,
            outstanding=dict((id, dict(x.max_outstanding)) for id, x in self.peripherals.items()),
            in_flight=dict((id, dict(x.max_in_flight)) for id, x in self.controllers.items()),
            memory_cases=dict((k, tuple(sorted(v, key=lambda x: x.rank))) for k, v in cases.items()),
            trace_hash=_trace_hash(records),
            incomplete=len(self.transactions) - len(complete),
            end_ps=self.kernel.now,
            events=self.kernel.processed,
            bank_stalls=dict(
                (id, x.banks.stalls) for id, x in self.peripherals.items() if isinstance(x, PipelinedPeripheral) and x.banks is not None
            ),
        )


def build_sim(t: Topology, s: Scenario, seed: int, randomize_phases: bool = True) -> SimInstance:
    validate_scenario(t, s)
    return SimInstance(t, s, seed, randomize_phases)


def run(sim: SimInstance, max_transactions: Optional[int] = None, horizon: Duration = DEFAULT_HORIZON) -> TraceStats:
    """
    Run until every generated transaction completes

    :param max_transactions: replaces the transaction count of the bounded workloads
    :raises HorizonExceeded: carries the partial statistics
    """
    if max_transactions is not None:
        for controller in sim.controllers.values():
            if controller.bounded:
                controller.set_count(max_transactions)
    sim.start()
    completed = sim.kernel.run(horizon.to_ps(), sim.done)
    stats = sim.stats()
    if not completed:
        logger.warning("horizon of %s exceeded, %d transactions incomplete", horizon, stats.incomplete)
        raise HorizonExceeded(stats)
    logger.debug("%d transactions, %d events, end at %d ps", len(stats.records), stats.events, stats.end_ps)
    return stats


def max_service(stats: TraceStats, kind: TransactionKind, beta: int) -> Duration:
    "Longest service of the observed controller for a (kind, beta) pair"
    try:
        return Duration.from_ps(stats.max_service_ps[(kind, beta)])
    except KeyError:
        raise NoMatchingRecords(f"no {kind} transaction with beta {beta} in trace")


def max_outstanding(stats: TraceStats, peripheral: str, kind: TransactionKind) -> int:
    "Maximum accepted, incomplete transactions observed at a peripheral"
    try:
        return stats.outstanding[peripheral][kind]
    except KeyError:
        raise UnknownIdError(peripheral, "peripheral")
