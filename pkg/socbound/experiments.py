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
Built-in validation suites and parameter sweeps

Every suite expands into independent cells (one simulation each); cells
run sequentially or in a process pool and their rows are sorted before
they are reported.
"""

import csv
import dataclasses
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .components import (
    HramDataMode,
    cdc_hop_delay,
    cdc_transaction_delay,
    xbar_delay,
)
from .duration import Duration
from .model import (
    AddressRange,
    BridgeKind,
    ClockDomain,
    ControllerModel,
    CrossbarModel,
    MemoryCase,
    PeripheralKind,
    PeripheralModel,
    SocBoundError,
    Topology,
    TransactionKind,
)
from .simulator import TraceStats, build_sim, run
from .system import TransactionQuery, isolation_bound, pessimism_pct, wcrt, with_phi
from .topology import parse_topology, serialize_topology, validate_topology
from .traffic import AddressPattern, KindMix, Mode, Scenario, Workload, parse_scenario, serialize_scenario

__all__ = [
    "Suite",
    "SweepDimension",
    "ReportRow",
    "ReportSummary",
    "ValidationReport",
    "SweepRow",
    "Cell",
    "BETAS",
    "PHIS",
    "DEPTHS",
    "CSV_COLUMNS",
    "SWEEP_COLUMNS",
    "DEFAULT_COUNT",
    "FULL_COUNT",
    "DEFAULT_SEEDS",
    "suite_cells",
    "run_cell",
    "validate",
    "sweep",
    "report_to_csv",
    "sweep_to_csv",
]

logger = logging.getLogger("socbound.experiments")

BETAS = (1, 2, 4, 8, 16, 32, 64, 128, 256)
PHIS = (1, 2, 4, 8, 16)
DEPTHS = (2, 4, 8)
CLOCK_PERIODS = (10000, 20000, 30000, 40000, 50000)
SUBORDINATE_PERIOD = 30000
SATURATION_PHI = 64
PARALLELISM_BETA = 16
CROSSBAR_PORTS = (1, 2, 4)
DEFAULT_COUNT = 10000
FULL_COUNT = 100000

CSV_COLUMNS = ["suite", "scenario", "kind", "beta", "phi_k", "V", "seed", "bound_ps", "measured_ps", "pessimism_pct", "pass"]
SWEEP_COLUMNS = ["dimension", "point", "kind", "metric", "value"]


class Suite(Enum):
    ISOLATION = "isolation"
    INTERFERENCE = "interference"
    PARALLELISM = "parallelism"
    CROSSBAR = "crossbar"
    CDC = "cdc"


class SweepDimension(Enum):
    BETA = "beta"
    PHI = "phi"
    CLOCK_RATIO = "clock_ratio"
    FIFO_DEPTH = "fifo_depth"


DEFAULT_SEEDS = {
    Suite.ISOLATION: 1,
    Suite.INTERFERENCE: 20,
    Suite.PARALLELISM: 1,
    Suite.CROSSBAR: 1,
    Suite.CDC: 20,
}


@dataclass(frozen=True)
class ReportRow:
    suite: str
    scenario: str
    kind: str
    beta: int
    phi_k: int
    V: int
    seed: int
    bound_ps: int
    measured_ps: int

    @property
    def key(self) -> Tuple[str, str, str, int, int, int, int]:
        return (self.suite, self.scenario, self.kind, self.beta, self.phi_k, self.V, self.seed)

    @property
    def pessimism_pct(self) -> Optional[Fraction]:
        if self.measured_ps == 0:
            return None
        return pessimism_pct(Duration.from_ps(self.bound_ps), Duration.from_ps(self.measured_ps))

    @property
    def passed(self) -> bool:
        return self.measured_ps <= self.bound_ps

    def to_csv(self) -> List[str]:
        pessimism = self.pessimism_pct
        return [
            self.suite,
            self.scenario,
            self.kind,
            str(self.beta),
            str(self.phi_k),
            str(self.V),
            str(self.seed),
            str(self.bound_ps),
            str(self.measured_ps),
            f"{float(pessimism):.3f}" if pessimism is not None else "",
            "true" if self.passed else "false",
        ]


@dataclass(frozen=True)
class ReportSummary:
    rows: int
    violations: int
    min_pessimism: Optional[Fraction]
    max_pessimism: Optional[Fraction]

    def __str__(self) -> str:
        if self.min_pessimism is None or self.max_pessimism is None:
            return f"{self.rows} rows, {self.violations} violations"
        return (
            f"{self.rows} rows, {self.violations} violations, "
            f"pessimism {float(self.min_pessimism):.3f}% .. {float(self.max_pessimism):.3f}%"
        )


@dataclass(frozen=True)
class ValidationReport:
    rows: Tuple[ReportRow, ...]

    @classmethod
    def of(cls, rows: Iterable[ReportRow]) -> "ValidationReport":
        return ValidationReport(rows=tuple(sorted(rows, key=lambda x: x.key)))

    @property
    def summary(self) -> ReportSummary:
        values = [x.pessimism_pct for x in self.rows if x.pessimism_pct is not None]
        return ReportSummary(
            rows=len(self.rows),
            violations=len(self.violations),
            min_pessimism=min(values) if values else None,
            max_pessimism=max(values) if values else None,
        )

    @property
    def violations(self) -> List[ReportRow]:
        return [x for x in self.rows if not x.passed]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SweepRow:
    dimension: str
    point: int
    kind: str
    metric: str
    value: int

    @property
    def key(self) -> Tuple[str, int, str, str]:
        return (self.dimension, self.point, self.kind, self.metric)


@dataclass(frozen=True)
class Cell:
    "One simulation and the bounds its rows are checked against"

    suite: str
    scenario_id: str
    topology: str  # serialized, cells cross process boundaries
    scenario: str
    seed: int
    phi_k: int = 0
    phi_overrides: Tuple[Tuple[str, int], ...] = ()
    halve: bool = False
    hram_mode: str = HramDataMode.PHYSICAL.value


def report_to_csv(report: ValidationReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(row.to_csv())
    return out.getvalue()


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([row.dimension, row.point, row.kind, row.metric, row.value])
    return out.getvalue()


# Topology variants


def replace_peripheral(t: Topology, id: str, **changes: int) -> Topology:
    peripherals = tuple(dataclasses.replace(x, **changes) if x.id == id else x for x in t.peripherals)
    return dataclasses.replace(t, peripherals=peripherals)


def replace_clock(t: Topology, name: str, period_ps: int) -> Topology:
    clocks = tuple(ClockDomain(x.name, Duration.from_ps(period_ps)) if x.name == name else x for x in t.clocks)
    return dataclasses.replace(t, clocks=clocks)


def crossbar_topology(t: Topology, ports: int) -> Topology:
    "Controllers directly on the crossbar clock, sharing one scratchpad"
    xbar = t.xbar_clock
    return Topology(
        clocks=(xbar,),
        controllers=tuple(ControllerModel(id=f"m{i}", clock=xbar.name, phi_read=1, phi_write=1) for i in range(ports)),
        bridges=(),
        crossbar=CrossbarModel(
            clock=xbar.name, d_tab=t.crossbar.d_tab, subordinate_port_count=ports, manager_port_count=1
        ),
        peripherals=(
            PeripheralModel(
                id="spm",
                kind=PeripheralKind.SPM,
                clock=xbar.name,
                fifo_depth=max(ports, DEPTHS[-1]),
                address=AddressRange(base=0x1000_0000, size=0x2_0000),
            ),
        ),
    )


def _mapped(t: Topology) -> List[PeripheralModel]:
    return [x for x in t.peripherals if x.address is not None]


def _betas(p: PeripheralModel) -> Tuple[int, ...]:
    return (1,) if p.kind == PeripheralKind.IO else BETAS


def _patterns(p: PeripheralModel, suite: Suite) -> Tuple[AddressPattern, ...]:
    if p.kind != PeripheralKind.MAIN_MEMORY:
        return (AddressPattern.SEQUENTIAL,)
    if suite == Suite.ISOLATION:
        return (AddressPattern.HIT_LOOP, AddressPattern.COLD_MISS, AddressPattern.CONFLICT_EVICT)
    return (AddressPattern.HIT_LOOP, AddressPattern.COLD_MISS)


def _scenario(observed: str, workloads: Dict[str, Workload]) -> str:
    return serialize_scenario(Scenario(observed=observed, workloads=tuple(workloads.items())))


def _kind(kind: TransactionKind) -> KindMix:
    return KindMix(kind.value)


def _first(t: Topology, kinds: Sequence[PeripheralKind]) -> PeripheralModel:
    for peripheral in _mapped(t):
        if peripheral.kind in kinds:
            return peripheral
    raise SocBoundError(f"no mapped {'/'.join(x.value for x in kinds)} peripheral in topology")


# Cells


def _isolation_cells(t: Topology, seeds: Sequence[int], count: int, **options) -> List[Cell]:  # type: ignore
    text = serialize_topology(t)
    cells = []
    for controller in t.controllers:
        for peripheral in _mapped(t):
            for kind in TransactionKind:
                for pattern in _patterns(peripheral, Suite.ISOLATION):
                    workload = Workload(
                        mode=Mode.ISOLATION,
                        count=count,
                        beta=_betas(peripheral),
                        kind=_kind(kind),
                        target=peripheral.id,
                        pattern=pattern,
                    )
                    scenario = _scenario(controller.id, {controller.id: workload})
                    for seed in seeds:
                        cells.append(
                            Cell(
                                suite=Suite.ISOLATION.value,
                                scenario_id=f"{controller.id}/{peripheral.id}/{pattern.value}",
                                topology=text,
                                scenario=scenario,
                                seed=seed,
                                **options,
                            )
                        )
    return cells


def _interference_cells(
    t: Topology,
    seeds: Sequence[int],
    count: int,
    betas: Optional[Sequence[int]] = None,
    phis: Sequence[int] = PHIS,
    peripherals: Optional[Sequence[PeripheralModel]] = None,
    **options,  # type: ignore
) -> List[Cell]:
    text = serialize_topology(t)
    observed = t.controllers[0].id
    interferers = [x.id for x in t.controllers[1:]]
    cells = []
    for peripheral in peripherals or _mapped(t):
        for kind in TransactionKind:
            for pattern in _patterns(peripheral, Suite.INTERFERENCE):
                for beta in betas or _betas(peripheral):
                    beta = 1 if peripheral.kind == PeripheralKind.IO else beta
                    for phi in phis if interferers else (0,):
                        workloads = {
                            observed: Workload(
                                mode=Mode.ISOLATION,
                                count=count,
                                beta=(beta,),
                                kind=_kind(kind),
                                target=peripheral.id,
                                pattern=pattern,
                            )
                        }
                        for x in interferers:
                            workloads[x] = Workload(
                                mode=Mode.INTERFERENCE,
                                beta=(beta,),
                                kind=KindMix.MIXED,
                                target=peripheral.id,
                                pattern=pattern,
                                phi=phi,
                            )
                        scenario = _scenario(observed, workloads)
                        for seed in seeds:
                            cells.append(
                                Cell(
                                    suite=Suite.INTERFERENCE.value,
                                    scenario_id=f"{observed}/{peripheral.id}/{pattern.value}",
                                    topology=text,
                                    scenario=scenario,
                                    seed=seed,
                                    phi_k=phi,
                                    phi_overrides=tuple((x, phi) for x in interferers),
                                    **options,
                                )
                            )
    return cells


def _parallelism_cells(
    t: Topology,
    seeds: Sequence[int],
    count: int,
    depths: Sequence[int] = DEPTHS,
    peripherals: Optional[Sequence[PeripheralModel]] = None,
    **options,  # type: ignore
) -> List[Cell]:
    observed = t.controllers[0].id
    cells = []
    targets = peripherals or [x for x in _mapped(t) if x.kind != PeripheralKind.GENERIC]
    for peripheral in targets:
        for depth in depths:
            variant = replace_peripheral(t, peripheral.id, fifo_depth=depth)
            text = serialize_topology(variant)
            for kind in TransactionKind:
                workload = Workload(
                    mode=Mode.SATURATION,
                    count=count,
                    beta=(1 if peripheral.kind == PeripheralKind.IO else PARALLELISM_BETA,),
                    kind=_kind(kind),
                    target=peripheral.id,
                    pattern=_patterns(peripheral, Suite.PARALLELISM)[0],
                    phi=SATURATION_PHI,
                )
                scenario = _scenario(observed, {observed: workload})
                for seed in seeds:
                    cells.append(
                        Cell(
                            suite=Suite.PARALLELISM.value,
                            scenario_id=f"{peripheral.id}/depth{depth}",
                            topology=text,
                            scenario=scenario,
                            seed=seed,
                            **options,
                        )
                    )
    return cells


def _crossbar_cells(t: Topology, seeds: Sequence[int], count: int, **options) -> List[Cell]:  # type: ignore
    cells = []
    for ports in CROSSBAR_PORTS:
        variant = crossbar_topology(t, ports)
        text = serialize_topology(variant)
        for kind in TransactionKind:
            workloads = dict(
                (x.id, Workload(mode=Mode.SATURATION, count=count, beta=(4,), kind=_kind(kind), target="spm"))
                for x in variant.controllers
            )
            scenario = _scenario("m0", workloads)
            for seed in seeds:
                cells.append(
                    Cell(
                        suite=Suite.CROSSBAR.value,
                        scenario_id=f"M{ports}",
                        topology=text,
                        scenario=scenario,
                        seed=seed,
                        **options,
                    )
                )
    return cells


def _cdc_cells(t: Topology, seeds: Sequence[int], count: int, **options) -> List[Cell]:  # type: ignore
    text = serialize_topology(t)
    target = _first(t, (PeripheralKind.SPM, PeripheralKind.IO, PeripheralKind.GENERIC))
    cells = []
    for controller in t.controllers:
        if not any(x.kind == BridgeKind.CDC for x in t.controller_bridges(controller.id)):
            continue
        for kind in TransactionKind:
            workload = Workload(mode=Mode.ISOLATION, count=count, beta=(1,), kind=_kind(kind), target=target.id)
            scenario = _scenario(controller.id, {controller.id: workload})
            for seed in seeds:
                cells.append(
                    Cell(
                        suite=Suite.CDC.value,
                        scenario_id=controller.id,
                        topology=text,
                        scenario=scenario,
                        seed=seed,
                        **options,
                    )
                )
    return cells


def suite_cells(
    t: Topology,
    suite: Suite,
    seeds: Optional[int] = None,
    count: int = DEFAULT_COUNT,
    halve: bool = False,
    mode: HramDataMode = HramDataMode.PHYSICAL,
) -> List[Cell]:
    "Expand a built-in suite into its simulation cells"
    seed_list = list(range(1, (seeds or DEFAULT_SEEDS[suite]) + 1))
    options = {"halve": halve, "hram_mode": mode.value}
    builder = {
        Suite.ISOLATION: _isolation_cells,
        Suite.INTERFERENCE: _interference_cells,
        Suite.PARALLELISM: _parallelism_cells,
        Suite.CROSSBAR: _crossbar_cells,
        Suite.CDC: _cdc_cells,
    }[suite]
    return builder(t, seed_list, count, **options)


# Rows


def _group(stats: TraceStats, issuer: Optional[str] = None) -> Dict[Tuple[TransactionKind, int, Optional[MemoryCase]], int]:
    "Longest service per (kind, beta, memory case) of the main transactions"
    result: Dict[Tuple[TransactionKind, int, Optional[MemoryCase]], int] = {}
    for record in stats.main_records(issuer):
        key = (record.kind, record.beta, record.memory_case)
        result[key] = max(result.get(key, 0), record.service_ps)
    return result


def _isolation_rows(cell: Cell, t: Topology, s: Scenario, stats: TraceStats, mode: HramDataMode) -> List[ReportRow]:
    target = s.workload(s.observed).target
    rows = []
    for (kind, beta, case), measured in _group(stats).items():
        q = TransactionQuery(controller=s.observed, peripheral=target, kind=kind, beta=beta, memory_case=case)  # type: ignore
        rows.append(
            ReportRow(
                suite=cell.suite,
                scenario=f"{cell.scenario_id}/{case.value}" if case else cell.scenario_id,
                kind=kind.value,
                beta=beta,
                phi_k=0,
                V=1,
                seed=cell.seed,
                bound_ps=isolation_bound(t, q, mode).total.to_ps(),
                measured_ps=measured,
            )
        )
    return rows


def _interference_rows(cell: Cell, t: Topology, s: Scenario, stats: TraceStats, mode: HramDataMode) -> List[ReportRow]:
    target = s.workload(s.observed).target
    bounded = with_phi(t, dict(cell.phi_overrides))
    case = stats.worst_case(target)  # type: ignore
    maxima: Dict[Tuple[TransactionKind, int], int] = {}
    for record in stats.main_records():
        key = (record.kind, record.beta)
        maxima[key] = max(maxima.get(key, 0), record.service_ps)
    rows = []
    for (kind, beta), measured in maxima.items():
        q = TransactionQuery(
            controller=s.observed,
            peripheral=target,  # type: ignore
            kind=kind,
            beta=beta,
            interferer_beta=beta,
            memory_case=case,
        )
        rows.append(
            ReportRow(
                suite=cell.suite,
                scenario=f"{cell.scenario_id}/{case.value}" if case else cell.scenario_id,
                kind=kind.value,
                beta=beta,
                phi_k=cell.phi_k,
                V=1,
                seed=cell.seed,
                bound_ps=wcrt(bounded, q, mode).total.to_ps(),
                measured_ps=measured,
            )
        )
    return rows


def _parallelism_rows(cell: Cell, t: Topology, s: Scenario, stats: TraceStats, mode: HramDataMode) -> List[ReportRow]:
    workload = s.workload(s.observed)
    peripheral = t.peripheral(workload.target)  # type: ignore
    kind = TransactionKind(workload.kind.value)
    return [
        ReportRow(
            suite=cell.suite,
            scenario=cell.scenario_id,
            kind=kind.value,
            beta=workload.beta[0],
            phi_k=0,
            V=1,
            seed=cell.seed,
            bound_ps=peripheral.chi(kind),
            measured_ps=stats.outstanding[peripheral.id][kind],
        )
    ]


def _crossbar_rows(cell: Cell, t: Topology, s: Scenario, stats: TraceStats, mode: HramDataMode) -> List[ReportRow]:
    ports = len(t.controllers)
    rows = []
    for kind in TransactionKind:
        traversals = [x.xbar_traversal_ps for x in stats.records if x.kind == kind and x.xbar_traversal_ps is not None]
        if not traversals:
            continue
        rows.append(
            ReportRow(
                suite=cell.suite,
                scenario=cell.scenario_id,
                kind=kind.value,
                beta=s.workload(s.observed).beta[0],
                phi_k=0,
                V=1,
                seed=cell.seed,
                bound_ps=xbar_delay(kind, ports, t.xbar_clock).total.to_ps(),
                measured_ps=max(traversals),
            )
        )
    return rows


def _cdc_rows(cell: Cell, t: Topology, s: Scenario, stats: TraceStats, mode: HramDataMode) -> List[ReportRow]:
    rows = []
    records = stats.main_records()
    for bridge in t.controller_bridges(s.observed):
        if bridge.kind != BridgeKind.CDC:
            continue
        tx, rx = t.clock(bridge.tx_clock), t.clock(bridge.rx_clock)
        for kind in TransactionKind:
            hops = [dict((d, v) for b, d, v in x.hops if b == bridge.id) for x in records if x.kind == kind]
            if not hops:
                continue
            measured = {
                "request": max(x["request"] for x in hops),
                "response": max(x["response"] for x in hops),
                "transaction": max(x["request"] + x["response"] for x in hops),
            }
            bounds = {
                "request": cdc_hop_delay(tx, rx),
                "response": cdc_hop_delay(rx, tx),
                "transaction": cdc_transaction_delay(tx, rx, kind).total,
            }
            for direction in ("request", "response", "transaction"):
                rows.append(
                    ReportRow(
                        suite=cell.suite,
                        scenario=f"{cell.scenario_id}/{bridge.id}/{direction}",
                        kind=kind.value,
                        beta=1,
                        phi_k=0,
                        V=1,
                        seed=cell.seed,
                        bound_ps=bounds[direction].to_ps(),
                        measured_ps=measured[direction],
                    )
                )
    return rows


def run_cell(cell: Cell) -> List[ReportRow]:
    "Simulate one cell and compare its measurements with the analytical bounds"
    t = parse_topology(cell.topology)
    s = parse_scenario(cell.scenario)
    mode = HramDataMode(cell.hram_mode)
    logger.debug("cell %s %s seed %d", cell.suite, cell.scenario_id, cell.seed)
    stats = run(build_sim(t, s, cell.seed))
    rows = {
        Suite.ISOLATION.value: _isolation_rows,
        Suite.INTERFERENCE.value: _interference_rows,
        Suite.PARALLELISM.value: _parallelism_rows,
        Suite.CROSSBAR.value: _crossbar_rows,
        Suite.CDC.value: _cdc_rows,
    }[cell.suite](cell, t, s, stats, mode)
    if cell.halve:
        rows = [dataclasses.replace(x, bound_ps=x.bound_ps // 2) for x in rows]
    return rows


def _execute(cells: Sequence[Cell], jobs: int = 1) -> List[ReportRow]:
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run_cell, cells))
    else:
        results = [run_cell(x) for x in cells]
    return [row for result in results for row in result]


def _check(t: Topology) -> None:
    result = validate_topology(t)
    if not result.ok:
        raise SocBoundError(f"invalid topology: {result.errors[0]}")


def validate(
    t: Topology,
    suite: Suite,
    seeds: Optional[int] = None,
    count: int = DEFAULT_COUNT,
    jobs: int = 1,
    halve: bool = False,
    mode: HramDataMode = HramDataMode.PHYSICAL,
) -> ValidationReport:
    "Run a built-in suite and compare every measured maximum with its bound"
    _check(t)
    cells = suite_cells(t, suite, seeds, count, halve, mode)
    logger.info("suite %s: %d cells", suite.value, len(cells))
    return ValidationReport.of(_execute(cells, jobs))


# Sweeps


def _sweep_cells(
    t: Topology, dimension: SweepDimension, point: int, seeds: Sequence[int], count: int, mode: HramDataMode
) -> List[Cell]:
    options = {"hram_mode": mode.value}
    spm = [_first(t, (PeripheralKind.SPM, PeripheralKind.IO, PeripheralKind.GENERIC))]
    if dimension == SweepDimension.BETA:
        cells = _interference_cells(t, seeds, count, betas=[point], phis=[1], peripherals=spm, **options)
        # observed alone
        return [
            dataclasses.replace(x, suite=Suite.ISOLATION.value, scenario=_alone(x.scenario), phi_overrides=(), phi_k=0)
            for x in cells
        ]
    elif dimension == SweepDimension.PHI:
        return _interference_cells(t, seeds, count, betas=[PARALLELISM_BETA], phis=[point], peripherals=spm, **options)
    elif dimension == SweepDimension.FIFO_DEPTH:
        return _parallelism_cells(t, seeds, count, depths=[point], peripherals=spm, **options)
    bridge = next((x for x in t.bridges if x.kind == BridgeKind.CDC), None)
    if bridge is None:
        raise SocBoundError("clock_ratio sweep needs a CDC bridge in the topology")
    variant = replace_clock(t, bridge.tx_clock, point)  # type: ignore
    variant = replace_clock(variant, bridge.rx_clock, SUBORDINATE_PERIOD)  # type: ignore
    _check(variant)
    return _cdc_cells(variant, seeds, count, **options)


def _alone(scenario: str) -> str:
    s = parse_scenario(scenario)
    return _scenario(s.observed, {s.observed: s.workload(s.observed)})


def _metric(row: ReportRow) -> str:
    if row.suite == Suite.CDC.value:
        return row.scenario.rsplit("/", 1)[-1] + "."
    return ""


def sweep(
    t: Topology,
    dimension: SweepDimension,
    points: Optional[Sequence[int]] = None,
    seeds: int = 1,
    count: int = DEFAULT_COUNT,
    jobs: int = 1,
    mode: HramDataMode = HramDataMode.PHYSICAL,
) -> List[SweepRow]:
    """
    Bound and measured curves along one dimension, long format

    Measured values are maxima over the seeds.
    """
    _check(t)
    if points is None:
        points = {
            SweepDimension.BETA: BETAS,
            SweepDimension.PHI: PHIS,
            SweepDimension.CLOCK_RATIO: CLOCK_PERIODS,
            SweepDimension.FIFO_DEPTH: DEPTHS,
        }[dimension]
    seed_list = list(range(1, seeds + 1))
    result: Dict[Tuple[str, int, str, str], int] = {}
    for point in points:
        for row in _execute(_sweep_cells(t, dimension, point, seed_list, count, mode), jobs):
            prefix = _metric(row)
            for metric, value in ((f"{prefix}bound_ps", row.bound_ps), (f"{prefix}measured_ps", row.measured_ps)):
                key = (dimension.value, point, row.kind, metric)
                result[key] = max(result.get(key, 0), value)
    return [SweepRow(*key, value) for key, value in sorted(result.items())]
