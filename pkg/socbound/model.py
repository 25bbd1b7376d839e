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

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, cast

from .duration import Duration
from .schema import (
    ADDRESS_KEYS,
    CDC_BRIDGE_KEYS,
    CLOCK_KEYS,
    CONTROLLER_KEYS,
    CROSSBAR_KEYS,
    DEFAULT_BANK_COUNT,
    DEFAULT_CDC_DEPTH,
    DEFAULT_D_TAB,
    DEFAULT_DW_AXI,
    DEFAULT_DW_HYPER,
    DEFAULT_HRAM_LATENCY,
    DEFAULT_IO_FIFO_DEPTH,
    DEFAULT_LINE_WIDTH,
    DEFAULT_LLC_FIFO_DEPTH,
    DEFAULT_MAX_BETA,
    DEFAULT_SET_COUNT,
    DEFAULT_SPM_FIFO_DEPTH,
    DEFAULT_WAY_COUNT,
    FIXED_BRIDGE_KEYS,
    GENERIC_KEYS,
    GENERIC_TIMING_KEYS,
    IO_KEYS,
    MAIN_MEMORY_KEYS,
    SPM_KEYS,
)

__all__ = [
    "SocBoundError",
    "TopologyError",
    "ConfigSyntaxError",
    "UnknownFieldError",
    "MissingFieldError",
    "DuplicateIdError",
    "UnknownIdError",
    "AnalysisError",
    "ScenarioError",
    "JsonData",
    "ClockDomain",
    "TransactionKind",
    "ControllerModel",
    "BridgeKind",
    "BridgeModel",
    "PeripheralKind",
    "MemoryCase",
    "PeripheralTimingModel",
    "AddressRange",
    "PeripheralModel",
    "CrossbarModel",
    "Topology",
    "Severity",
    "Diagnostic",
    "ValidationResult",
    "check_keys",
    "parse_int",
]

JsonData = Dict[str, Any]


class SocBoundError(Exception):
    pass


class TopologyError(SocBoundError):
    pass


class ConfigSyntaxError(TopologyError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownFieldError(TopologyError):
    pass


class MissingFieldError(TopologyError):
    pass


class DuplicateIdError(TopologyError):
    def __init__(self, id: str) -> None:
        super().__init__(f"duplicate id '{id}'")
        self.id = id


class UnknownIdError(TopologyError):
    def __init__(self, id: str, what: str = "id") -> None:
        super().__init__(f"unknown {what} '{id}'")
        self.id = id


class AnalysisError(SocBoundError):
    pass


class ScenarioError(SocBoundError):
    pass


def check_keys(data: Any, keys: Tuple[List[str], List[str]], where: str) -> JsonData:
    "Enforce the strict schema: all required keys present, no unknown keys"
    if not isinstance(data, dict):
        raise TopologyError(f"{where}: expected an object, got {type(data).__name__}")
    required, optional = keys
    for key in data:
        if key not in required and key not in optional:
            raise UnknownFieldError(f"{where}: unknown field '{key}'")
    for key in required:
        if key not in data:
            raise MissingFieldError(f"{where}: missing required field '{key}'")
    return cast(JsonData, data)


def parse_int(value: Any, where: str) -> int:
    "Integers may be given as JSON numbers or as (hexadecimal) strings"
    if isinstance(value, bool):
        raise TopologyError(f"{where}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 0)
        except ValueError:
            pass
    raise TopologyError(f"{where}: expected an integer, got {value!r}")


def _parse_str(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise TopologyError(f"{where}: expected a non-empty string, got {value!r}")
    return value


def _parse_duration(value: Any, where: str) -> Duration:
    ps = parse_int(value, where)
    if ps < 0:
        raise TopologyError(f"{where}: negative duration {ps}")
    return Duration(ps)


class TransactionKind(Enum):
    READ = "read"
    WRITE = "write"

    @property
    def other(self) -> "TransactionKind":
        return TransactionKind.WRITE if self == TransactionKind.READ else TransactionKind.READ

    def __str__(self) -> str:
        return self.value


class BridgeKind(Enum):
    CDC = "cdc"
    FIXED = "fixed"


class PeripheralKind(Enum):
    SPM = "spm"
    IO = "io"
    MAIN_MEMORY = "main_memory"
    GENERIC = "generic"


class MemoryCase(Enum):
    HIT = "hit"
    MISS_REFILL = "miss_refill"
    MISS_REFILL_EVICT = "miss_refill_evict"

    @property
    def rank(self) -> int:
        return list(MemoryCase).index(self)

    @classmethod
    def worst(cls, cases: Sequence["MemoryCase"]) -> "MemoryCase":
        return max(cases, key=lambda x: x.rank)


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ClockDomain:
    name: str
    period: Duration

    @classmethod
    def from_dict(cls, data: Any) -> "ClockDomain":
        data = check_keys(data, CLOCK_KEYS, "clocks[]")
        name = _parse_str(data["name"], "clocks[].name")
        return ClockDomain(name=name, period=_parse_duration(data["period_ps"], f"clocks[{name}].period_ps"))

    @classmethod
    def from_ns(cls, name: str, nanoseconds: int) -> "ClockDomain":
        return ClockDomain(name=name, period=Duration.from_ns(nanoseconds))

    def to_dict(self) -> JsonData:
        return {"name": self.name, "period_ps": self.period.to_ps()}


@dataclass(frozen=True)
class ControllerModel:
    id: str
    clock: str
    phi_read: int
    phi_write: int
    bridge_path: Tuple[str, ...] = ()
    max_beta: int = DEFAULT_MAX_BETA

    @classmethod
    def from_dict(cls, data: Any) -> "ControllerModel":
        data = check_keys(data, CONTROLLER_KEYS, "controllers[]")
        id = _parse_str(data["id"], "controllers[].id")
        where = f"controllers[{id}]"
        bridge_path = data.get("bridge_path", [])
        if not isinstance(bridge_path, list):
            raise TopologyError(f"{where}.bridge_path: expected a list")
        return ControllerModel(
            id=id,
            clock=_parse_str(data["clock"], f"{where}.clock"),
            phi_read=parse_int(data["phi_read"], f"{where}.phi_read"),
            phi_write=parse_int(data["phi_write"], f"{where}.phi_write"),
            bridge_path=tuple(_parse_str(x, f"{where}.bridge_path[]") for x in bridge_path),
            max_beta=parse_int(data.get("max_beta", DEFAULT_MAX_BETA), f"{where}.max_beta"),
        )

    def phi(self, kind: TransactionKind) -> int:
        "Maximum outstanding transactions of the given kind"
        return self.phi_read if kind == TransactionKind.READ else self.phi_write

    def to_dict(self) -> JsonData:
        return {
            "id": self.id,
            "clock": self.clock,
            "phi_read": self.phi_read,
            "phi_write": self.phi_write,
            "bridge_path": list(self.bridge_path),
            "max_beta": self.max_beta,
        }


@dataclass(frozen=True)
class BridgeModel:
    id: str
    kind: BridgeKind
    tx_clock: Optional[str] = None
    rx_clock: Optional[str] = None
    depth: int = DEFAULT_CDC_DEPTH
    d_read: Optional[Duration] = None
    d_write: Optional[Duration] = None

    @classmethod
    def from_dict(cls, data: Any) -> "BridgeModel":
        if not isinstance(data, dict) or "kind" not in data:
            raise MissingFieldError("bridges[]: missing required field 'kind'")
        try:
            kind = BridgeKind(data["kind"])
        except ValueError:
            raise TopologyError(f"bridges[]: invalid bridge kind {data['kind']!r}")
        if kind == BridgeKind.CDC:
            data = check_keys(data, CDC_BRIDGE_KEYS, "bridges[]")
            id = _parse_str(data["id"], "bridges[].id")
            return BridgeModel(
                id=id,
                kind=kind,
                tx_clock=_parse_str(data["tx_clock"], f"bridges[{id}].tx_clock"),
                rx_clock=_parse_str(data["rx_clock"], f"bridges[{id}].rx_clock"),
                depth=parse_int(data.get("depth", DEFAULT_CDC_DEPTH), f"bridges[{id}].depth"),
            )
        else:
            data = check_keys(data, FIXED_BRIDGE_KEYS, "bridges[]")
            id = _parse_str(data["id"], "bridges[].id")
            return BridgeModel(
                id=id,
                kind=kind,
                d_read=_parse_duration(data["d_read_ps"], f"bridges[{id}].d_read_ps"),
                d_write=_parse_duration(data["d_write_ps"], f"bridges[{id}].d_write_ps"),
            )

    def fixed_delay(self, kind: TransactionKind) -> Duration:
        return cast(Duration, self.d_read if kind == TransactionKind.READ else self.d_write)

    def to_dict(self) -> JsonData:
        if self.kind == BridgeKind.CDC:
            return {"id": self.id, "kind": self.kind.value, "tx_clock": self.tx_clock, "rx_clock": self.rx_clock, "depth": self.depth}
        return {
            "id": self.id,
            "kind": self.kind.value,
            "d_read_ps": cast(Duration, self.d_read).to_ps(),
            "d_write_ps": cast(Duration, self.d_write).to_ps(),
        }


@dataclass(frozen=True)
class PeripheralTimingModel:
    """
    Specialized timing of one peripheral

    t_data is the per-word data time rounded up to the picosecond,
    t_data_exact keeps the rational value used to compute service bounds.
    """

    chi_read: int
    chi_write: int
    rho: int
    theta: int
    t_ctrl_read: Duration
    t_ctrl_write: Duration
    t_data: Duration
    t_data_exact: Optional[Fraction] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.t_data_exact is None:
            object.__setattr__(self, "t_data_exact", Fraction(self.t_data.to_ps()))

    @classmethod
    def from_dict(cls, data: Any, where: str = "timing") -> "PeripheralTimingModel":
        data = check_keys(data, GENERIC_TIMING_KEYS, where)
        return PeripheralTimingModel(
            chi_read=parse_int(data["chi_read"], f"{where}.chi_read"),
            chi_write=parse_int(data["chi_write"], f"{where}.chi_write"),
            rho=parse_int(data["rho"], f"{where}.rho"),
            theta=parse_int(data["theta"], f"{where}.theta"),
            t_ctrl_read=_parse_duration(data["t_ctrl_read_ps"], f"{where}.t_ctrl_read_ps"),
            t_ctrl_write=_parse_duration(data["t_ctrl_write_ps"], f"{where}.t_ctrl_write_ps"),
            t_data=_parse_duration(data["t_data_ps"], f"{where}.t_data_ps"),
        )

    def chi(self, kind: TransactionKind) -> int:
        return self.chi_read if kind == TransactionKind.READ else self.chi_write

    def t_ctrl(self, kind: TransactionKind) -> Duration:
        return self.t_ctrl_read if kind == TransactionKind.READ else self.t_ctrl_write

    @property
    def t_ctrl_max(self) -> Duration:
        return max(self.t_ctrl_read, self.t_ctrl_write)

    def data_time(self, beta: int) -> Duration:
        "t_data * beta, rounded up to the picosecond"
        return Duration.from_fraction(cast(Fraction, self.t_data_exact) * beta)

    def service(self, kind: TransactionKind, beta: int) -> Duration:
        "Service bound d = t_ctrl + t_data * beta"
        return self.t_ctrl(kind) + self.data_time(beta)

    def to_dict(self) -> JsonData:
        return {
            "chi_read": self.chi_read,
            "chi_write": self.chi_write,
            "rho": self.rho,
            "theta": self.theta,
            "t_ctrl_read_ps": self.t_ctrl_read.to_ps(),
            "t_ctrl_write_ps": self.t_ctrl_write.to_ps(),
            "t_data_ps": self.t_data.to_ps(),
        }


@dataclass(frozen=True)
class AddressRange:
    base: int
    size: int

    @classmethod
    def from_dict(cls, data: Any, where: str) -> "AddressRange":
        data = check_keys(data, ADDRESS_KEYS, where)
        return AddressRange(base=parse_int(data["base"], f"{where}.base"), size=parse_int(data["size"], f"{where}.size"))

    @property
    def end(self) -> int:
        return self.base + self.size

    def contains(self, address: int) -> bool:
        return self.base <= address < self.end

    def overlaps(self, other: "AddressRange") -> bool:
        return self.base < other.end and other.base < self.end

    def __str__(self) -> str:
        return f"[0x{self.base:x}, 0x{self.end:x})"


@dataclass(frozen=True)
class PeripheralModel:
    id: str
    kind: PeripheralKind
    clock: str
    fifo_depth: int
    address: Optional[AddressRange] = None
    # Spm
    bank_count: int = DEFAULT_BANK_COUNT
    # MainMemory
    llc_clock: Optional[str] = None
    hmc_clock: Optional[str] = None
    hram_clock: Optional[str] = None
    line_width: int = DEFAULT_LINE_WIDTH
    dw_axi: int = DEFAULT_DW_AXI
    dw_hyper: int = DEFAULT_DW_HYPER
    hram_access_latency_cycles: int = DEFAULT_HRAM_LATENCY
    set_count: int = DEFAULT_SET_COUNT
    way_count: int = DEFAULT_WAY_COUNT
    # Generic
    timing: Optional[PeripheralTimingModel] = None

    @classmethod
    def from_dict(cls, data: Any) -> "PeripheralModel":
        if not isinstance(data, dict) or "kind" not in data:
            raise MissingFieldError("peripherals[]: missing required field 'kind'")
        try:
            kind = PeripheralKind(data["kind"])
        except ValueError:
            raise TopologyError(f"peripherals[]: invalid peripheral kind {data['kind']!r}")
        keys = {
            PeripheralKind.SPM: SPM_KEYS,
            PeripheralKind.IO: IO_KEYS,
            PeripheralKind.MAIN_MEMORY: MAIN_MEMORY_KEYS,
            PeripheralKind.GENERIC: GENERIC_KEYS,
        }[kind]
        data = check_keys(data, keys, "peripherals[]")
        id = _parse_str(data["id"], "peripherals[].id")
        where = f"peripherals[{id}]"
        clock = _parse_str(data["clock"], f"{where}.clock")
        address = AddressRange.from_dict(data["address"], f"{where}.address") if "address" in data else None
        if kind == PeripheralKind.SPM:
            return PeripheralModel(
                id=id,
                kind=kind,
                clock=clock,
                address=address,
                fifo_depth=parse_int(data.get("fifo_depth", DEFAULT_SPM_FIFO_DEPTH), f"{where}.fifo_depth"),
                bank_count=parse_int(data.get("bank_count", DEFAULT_BANK_COUNT), f"{where}.bank_count"),
            )
        elif kind == PeripheralKind.IO:
            return PeripheralModel(
                id=id,
                kind=kind,
                clock=clock,
                address=address,
                fifo_depth=parse_int(data.get("fifo_depth", DEFAULT_IO_FIFO_DEPTH), f"{where}.fifo_depth"),
            )
        elif kind == PeripheralKind.MAIN_MEMORY:
            return PeripheralModel(
                id=id,
                kind=kind,
                clock=clock,
                address=address,
                fifo_depth=parse_int(data.get("llc_fifo_depth", DEFAULT_LLC_FIFO_DEPTH), f"{where}.llc_fifo_depth"),
                # the LLC and the HMC front-end default to the AXI clock
                llc_clock=_parse_str(data.get("llc_clock", clock), f"{where}.llc_clock"),
                hmc_clock=_parse_str(data.get("hmc_clock", data.get("llc_clock", clock)), f"{where}.hmc_clock"),
                hram_clock=_parse_str(data["hram_clock"], f"{where}.hram_clock"),
                line_width=parse_int(data.get("line_width", DEFAULT_LINE_WIDTH), f"{where}.line_width"),
                dw_axi=parse_int(data.get("dw_axi", DEFAULT_DW_AXI), f"{where}.dw_axi"),
                dw_hyper=parse_int(data.get("dw_hyper", DEFAULT_DW_HYPER), f"{where}.dw_hyper"),
                hram_access_latency_cycles=parse_int(
                    data.get("hram_access_latency_cycles", DEFAULT_HRAM_LATENCY), f"{where}.hram_access_latency_cycles"
                ),
                set_count=parse_int(data.get("set_count", DEFAULT_SET_COUNT), f"{where}.set_count"),
                way_count=parse_int(data.get("way_count", DEFAULT_WAY_COUNT), f"{where}.way_count"),
            )
        else:
            timing = PeripheralTimingModel.from_dict(data["timing"], f"{where}.timing")
            return PeripheralModel(
                id=id,
                kind=kind,
                clock=clock,
                address=address,
                fifo_depth=max(timing.chi_read, timing.chi_write),
                timing=timing,
            )

    @property
    def llc_fifo_depth(self) -> int:
        return self.fifo_depth

    @property
    def clock_refs(self) -> List[str]:
        "All the clock domains this peripheral is fed with"
        if self.kind == PeripheralKind.MAIN_MEMORY:
            return [self.clock, cast(str, self.llc_clock), cast(str, self.hmc_clock), cast(str, self.hram_clock)]
        return [self.clock]

    def chi(self, kind: TransactionKind) -> int:
        "Maximum accepted outstanding transactions of the given kind"
        if self.timing is not None:
            return self.timing.chi(kind)
        return self.fifo_depth

    def to_dict(self) -> JsonData:
        data: JsonData = {"id": self.id, "kind": self.kind.value, "clock": self.clock}
        if self.kind == PeripheralKind.SPM:
            data["fifo_depth"] = self.fifo_depth
            data["bank_count"] = self.bank_count
        elif self.kind == PeripheralKind.IO:
            data["fifo_depth"] = self.fifo_depth
        elif self.kind == PeripheralKind.MAIN_MEMORY:
            data.update(
                {
                    "llc_clock": self.llc_clock,
                    "hmc_clock": self.hmc_clock,
                    "hram_clock": self.hram_clock,
                    "line_width": self.line_width,
                    "llc_fifo_depth": self.fifo_depth,
                    "dw_axi": self.dw_axi,
                    "dw_hyper": self.dw_hyper,
                    "hram_access_latency_cycles": self.hram_access_latency_cycles,
                    "set_count": self.set_count,
                    "way_count": self.way_count,
                }
            )
        else:
            data["timing"] = cast(PeripheralTimingModel, self.timing).to_dict()
        return data


@dataclass(frozen=True)
class CrossbarModel:
    clock: str
    d_tab: int = DEFAULT_D_TAB
    subordinate_port_count: int = 1
    manager_port_count: int = 1
    pipeline_stages: int = 0

    @classmethod
    def from_dict(cls, data: Any, controller_count: int, peripheral_count: int) -> "CrossbarModel":
        data = check_keys(data, CROSSBAR_KEYS, "crossbar")
        return CrossbarModel(
            clock=_parse_str(data["clock"], "crossbar.clock"),
            d_tab=parse_int(data.get("d_tab", DEFAULT_D_TAB), "crossbar.d_tab"),
            subordinate_port_count=parse_int(data.get("subordinate_port_count", controller_count), "crossbar.subordinate_port_count"),
            manager_port_count=parse_int(data.get("manager_port_count", peripheral_count), "crossbar.manager_port_count"),
            pipeline_stages=parse_int(data.get("pipeline_stages", 0), "crossbar.pipeline_stages"),
        )

    def to_dict(self) -> JsonData:
        return {
            "clock": self.clock,
            "d_tab": self.d_tab,
            "subordinate_port_count": self.subordinate_port_count,
            "manager_port_count": self.manager_port_count,
            "pipeline_stages": self.pipeline_stages,
        }


@dataclass(frozen=True)
class Topology:
    clocks: Tuple[ClockDomain, ...]
    controllers: Tuple[ControllerModel, ...]
    bridges: Tuple[BridgeModel, ...]
    crossbar: CrossbarModel
    peripherals: Tuple[PeripheralModel, ...]

    @cached_property
    def _clocks(self) -> Dict[str, ClockDomain]:
        return dict((x.name, x) for x in self.clocks)

    @cached_property
    def _controllers(self) -> Dict[str, ControllerModel]:
        return dict((x.id, x) for x in self.controllers)

    @cached_property
    def _bridges(self) -> Dict[str, BridgeModel]:
        return dict((x.id, x) for x in self.bridges)

    @cached_property
    def _peripherals(self) -> Dict[str, PeripheralModel]:
        return dict((x.id, x) for x in self.peripherals)

    def clock(self, name: Optional[str]) -> ClockDomain:
        try:
            return self._clocks[cast(str, name)]
        except KeyError:
            raise UnknownIdError(cast(str, name), "clock")

    def controller(self, id: str) -> ControllerModel:
        try:
            return self._controllers[id]
        except KeyError:
            raise UnknownIdError(id, "controller")

    def bridge(self, id: str) -> BridgeModel:
        try:
            return self._bridges[id]
        except KeyError:
            raise UnknownIdError(id, "bridge")

    def peripheral(self, id: str) -> PeripheralModel:
        try:
            return self._peripherals[id]
        except KeyError:
            raise UnknownIdError(id, "peripheral")

    def peripheral_at(self, address: int) -> PeripheralModel:
        "Address decoding of the crossbar demux"
        for peripheral in self.peripherals:
            if peripheral.address is not None and peripheral.address.contains(address):
                return peripheral
        raise UnknownIdError(f"0x{address:x}", "address")

    @property
    def memory_map(self) -> Dict[str, AddressRange]:
        return dict((x.id, x.address) for x in self.peripherals if x.address is not None)

    @property
    def xbar_clock(self) -> ClockDomain:
        return self.clock(self.crossbar.clock)

    def controller_bridges(self, id: str) -> List[BridgeModel]:
        return [self.bridge(x) for x in self.controller(id).bridge_path]


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    offending_id: Optional[str] = None

    def __str__(self) -> str:
        where = f" [{self.offending_id}]" if self.offending_id else ""
        return f"{self.severity.value}{where}: {self.message}"


@dataclass(frozen=True)
class ValidationResult:
    diagnostics: Tuple[Diagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> List[Diagnostic]:
        return [x for x in self.diagnostics if x.severity == Severity.ERROR]

    @property
    def warnings(self) -> List[Diagnostic]:
        return [x for x in self.diagnostics if x.severity == Severity.WARNING]

    def __str__(self) -> str:
        return "\n".join(str(x) for x in self.diagnostics)


