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

import dataclasses
import json
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional

from .model import (
    AddressRange,
    BridgeKind,
    BridgeModel,
    ClockDomain,
    ConfigSyntaxError,
    ControllerModel,
    CrossbarModel,
    Diagnostic,
    DuplicateIdError,
    JsonData,
    PeripheralKind,
    PeripheralModel,
    Severity,
    Topology,
    TopologyError,
    TransactionKind,
    UnknownIdError,
    ValidationResult,
    check_keys,
)
from .schema import HRAM_LATENCY_RANGE, MEMORY_MAP_KEYS, MIN_CDC_DEPTH, TOPOLOGY_KEYS

__all__ = [
    "REFERENCE_TOPOLOGY",
    "parse_topology",
    "serialize_topology",
    "load_topology",
    "save_topology",
    "validate_topology",
    "interfering_set",
    "loads_json",
]

REFERENCE_TOPOLOGY = Path(__file__).parent / "data" / "reference.json"


def loads_json(text: str) -> Any:
    "Decode a JSON document, reporting syntax errors with their position"
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise ConfigSyntaxError(ex.msg, ex.lineno, ex.colno)


def _parse_list(data: JsonData, key: str) -> List[Any]:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise TopologyError(f"{key}: expected a list")
    return value


def parse_topology(config_text: str) -> Topology:
    "Parse a topology document"
    data = check_keys(loads_json(config_text), TOPOLOGY_KEYS, "topology")
    clocks = [ClockDomain.from_dict(x) for x in _parse_list(data, "clocks")]
    controllers = [ControllerModel.from_dict(x) for x in _parse_list(data, "controllers")]
    bridges = [BridgeModel.from_dict(x) for x in _parse_list(data, "bridges")]
    peripherals = [PeripheralModel.from_dict(x) for x in _parse_list(data, "peripherals")]
    crossbar = CrossbarModel.from_dict(data["crossbar"], len(controllers), len(peripherals))
    # Duplicates
    names: List[str] = []
    for name in [x.name for x in clocks]:
        if name in names:
            raise DuplicateIdError(name)
        names.append(name)
    ids: List[str] = []
    for id in [x.id for x in controllers] + [x.id for x in bridges] + [x.id for x in peripherals]:
        if id in ids:
            raise DuplicateIdError(id)
        ids.append(id)
    # Memory map
    peripheral_ids = [x.id for x in peripherals]
    for entry in _parse_list(data, "memory_map"):
        entry = check_keys(entry, MEMORY_MAP_KEYS, "memory_map[]")
        id = entry["peripheral"]
        if id not in peripheral_ids:
            raise UnknownIdError(str(id), "peripheral")
        index = peripheral_ids.index(id)
        if peripherals[index].address is not None:
            raise TopologyError(f"memory_map[{id}]: address range given twice")
        address = AddressRange.from_dict({"base": entry["base"], "size": entry["size"]}, f"memory_map[{id}]")
        peripherals[index] = dataclasses.replace(peripherals[index], address=address)
    return Topology(
        clocks=tuple(clocks),
        controllers=tuple(controllers),
        bridges=tuple(bridges),
        crossbar=crossbar,
        peripherals=tuple(peripherals),
    )


def topology_to_dict(t: Topology) -> JsonData:
    return {
        "clocks": [x.to_dict() for x in t.clocks],
        "controllers": [x.to_dict() for x in t.controllers],
        "bridges": [x.to_dict() for x in t.bridges],
        "crossbar": t.crossbar.to_dict(),
        "peripherals": [x.to_dict() for x in t.peripherals],
        "memory_map": [
            {"peripheral": x.id, "base": f"0x{x.address.base:x}", "size": f"0x{x.address.size:x}"}
            for x in t.peripherals
            if x.address is not None
        ],
    }


def serialize_topology(t: Topology) -> str:
    "Return topology as json"
    return json.dumps(topology_to_dict(t), indent=2)


def load_topology(filename: Path) -> Topology:
    "Load a topology file"
    with filename.open("r") as f:
        return parse_topology(f.read())


def save_topology(t: Topology, filename: Path) -> None:
    "Write a topology file"
    with filename.open("w") as f:
        f.write(serialize_topology(t))
        f.write("\n")


def validate_topology(t: Topology) -> ValidationResult:
    "Check every structural invariant of a topology"
    diagnostics: List[Diagnostic] = []

    def error(message: str, id: Optional[str] = None) -> None:
        diagnostics.append(Diagnostic(Severity.ERROR, message, id))

    def warning(message: str, id: Optional[str] = None) -> None:
        diagnostics.append(Diagnostic(Severity.WARNING, message, id))

    clocks: Dict[str, ClockDomain] = {}
    for clock in t.clocks:
        if clock.name in clocks:
            error("duplicate clock name", clock.name)
        clocks[clock.name] = clock
        if clock.period.to_ps() <= 0:
            error("clock period must be strictly positive", clock.name)

    def check_clock(name: Optional[str], owner: str) -> bool:
        if name not in clocks:
            error(f"unknown clock '{name}'", owner)
            return False
        return True

    seen: List[str] = []
    for id in [x.id for x in t.controllers] + [x.id for x in t.bridges] + [x.id for x in t.peripherals]:
        if id in seen:
            error("duplicate id", id)
        seen.append(id)

    if not t.controllers:
        error("at least one controller is required")
    if not t.peripherals:
        error("at least one peripheral is required")

    # Crossbar
    xbar_ok = check_clock(t.crossbar.clock, "crossbar")
    if t.crossbar.pipeline_stages != 0:
        error("only the fully combinatorial crossbar is supported (pipeline_stages = 0)", "crossbar")
    if t.crossbar.d_tab < 1:
        error("d_tab must be positive", "crossbar")
    if t.crossbar.subordinate_port_count < len(t.controllers):
        error("not enough subordinate ports for the controllers", "crossbar")
    if t.crossbar.manager_port_count < len(t.peripherals):
        error("not enough manager ports for the peripherals", "crossbar")
    max_chi_write = max([x.chi(TransactionKind.WRITE) for x in t.peripherals], default=0)
    if t.crossbar.d_tab < max_chi_write:
        error(
            f"crossbar W-table smaller than peripheral write parallelism (d_tab {t.crossbar.d_tab} < {max_chi_write})",
            "crossbar",
        )

    # Bridges
    bridges = dict((x.id, x) for x in t.bridges)
    owners: Dict[str, List[str]] = dict((x.id, []) for x in t.bridges)
    for bridge in t.bridges:
        if bridge.kind == BridgeKind.CDC:
            check_clock(bridge.tx_clock, bridge.id)
            check_clock(bridge.rx_clock, bridge.id)
            if bridge.depth < MIN_CDC_DEPTH:
                error(f"CDC FIFO depth must be at least {MIN_CDC_DEPTH}", bridge.id)
        else:
            if bridge.d_read is None or bridge.d_write is None:
                error("fixed-delay bridge requires d_read and d_write", bridge.id)
            elif xbar_ok:
                period = clocks[t.crossbar.clock].period.to_ps()
                for delay in (bridge.d_read, bridge.d_write):
                    if (delay.to_ps() // 2) % period or (delay.to_ps() - delay.to_ps() // 2) % period:
                        warning("fixed delay halves are not multiples of the crossbar clock period", bridge.id)
                        break

    # Controllers
    for controller in t.controllers:
        check_clock(controller.clock, controller.id)
        if controller.phi_read < 1 or controller.phi_write < 1:
            error("phi_read and phi_write must be at least 1", controller.id)
        if controller.max_beta < 1:
            error("max_beta must be at least 1", controller.id)
        cdc_in_path = False
        for bridge_id in controller.bridge_path:
            if bridge_id not in bridges:
                error(f"unknown bridge '{bridge_id}'", controller.id)
                continue
            owners[bridge_id].append(controller.id)
            cdc_in_path = cdc_in_path or bridges[bridge_id].kind == BridgeKind.CDC
        path = [bridges[x] for x in controller.bridge_path if x in bridges]
        cdcs = [x for x in path if x.kind == BridgeKind.CDC]
        if xbar_ok and not cdc_in_path and controller.clock != t.crossbar.clock:
            warning("controller clock differs from the crossbar clock without a CDC bridge", controller.id)
        if cdcs and (cdcs[0].tx_clock != controller.clock or cdcs[-1].rx_clock != t.crossbar.clock):
            warning("CDC bridge clocks do not match the controller and crossbar clocks", controller.id)
    for bridge_id, controller_ids in owners.items():
        if len(controller_ids) != 1:
            error(f"bridge must appear in exactly one controller path (found {len(controller_ids)})", bridge_id)

    # Peripherals
    for peripheral in t.peripherals:
        for name in peripheral.clock_refs:
            check_clock(name, peripheral.id)
        if peripheral.fifo_depth < 1:
            error("fifo_depth must be at least 1", peripheral.id)
        if xbar_ok and peripheral.clock != t.crossbar.clock:
            warning("peripheral clock differs from the crossbar clock", peripheral.id)
        if peripheral.kind == PeripheralKind.SPM and peripheral.bank_count < 1:
            error("bank_count must be at least 1", peripheral.id)
        if peripheral.kind == PeripheralKind.MAIN_MEMORY:
            for name, width in (("dw_axi", peripheral.dw_axi), ("dw_hyper", peripheral.dw_hyper)):
                if width <= 0 or width % 8:
                    error(f"{name} must be a positive multiple of 8", peripheral.id)
            if peripheral.line_width < 1:
                error("line_width must be at least 1", peripheral.id)
            low, high = HRAM_LATENCY_RANGE
            if not low <= peripheral.hram_access_latency_cycles <= high:
                error(f"hram_access_latency_cycles must be within [{low}, {high}]", peripheral.id)
            if peripheral.set_count < 1 or peripheral.way_count < 1:
                error("set_count and way_count must be at least 1", peripheral.id)
            if peripheral.llc_clock != peripheral.clock or peripheral.hmc_clock != peripheral.llc_clock:
                warning("LLC and HMC front-end are expected to run at the AXI clock", peripheral.id)
        if peripheral.kind == PeripheralKind.GENERIC and peripheral.timing is not None:
            timing = peripheral.timing
            if timing.rho not in (0, 1) or timing.theta not in (0, 1):
                error("rho and theta must be 0 or 1", peripheral.id)
            if timing.chi_read < 1 or timing.chi_write < 1:
                error("chi values must be at least 1", peripheral.id)
            if xbar_ok and peripheral.clock in clocks:
                period = clocks[peripheral.clock].period.to_ps()
                if any(x.to_ps() % period for x in (timing.t_ctrl_read, timing.t_ctrl_write, timing.t_data)):
                    warning("generic timing is not a multiple of the peripheral clock period", peripheral.id)

    # Memory map
    mapped = [x for x in t.peripherals if x.address is not None]
    for peripheral in t.peripherals:
        if peripheral.address is None:
            error("peripheral has no address range", peripheral.id)
        elif peripheral.address.size <= 0 or peripheral.address.base < 0:
            error("address range must be non-empty", peripheral.id)
    for i, a in enumerate(mapped):
        for b in mapped[i + 1 :]:
            if a.address.overlaps(b.address):  # type: ignore
                error(f"address ranges of '{a.id}' and '{b.id}' overlap", f"{a.id},{b.id}")

    return ValidationResult(tuple(diagnostics))


def interfering_set(t: Topology, ci: str, pj: str) -> FrozenSet[str]:
    "Controllers other than ci that can reach pj through the crossbar"
    t.controller(ci)
    t.peripheral(pj)
    # every manager can access every subordinate
    return frozenset(x.id for x in t.controllers if x.id != ci)
