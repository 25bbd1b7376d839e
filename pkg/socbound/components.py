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
Closed-form worst-case delays of the single IPs

Every function is pure; clock periods are taken from ClockDomain values,
all the results are exact integer picoseconds except the per-word data
time of the main memory, which is kept as a rational and rounded up
only when multiplied by the burst length.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple, cast

from .duration import ZERO, Duration
from .model import (
    AnalysisError,
    ClockDomain,
    JsonData,
    MemoryCase,
    PeripheralKind,
    PeripheralModel,
    PeripheralTimingModel,
    Topology,
    TransactionKind,
)
from .schema import HRAM_LATENCY_RANGE

__all__ = [
    "BoundBreakdown",
    "HramDataMode",
    "MemoryParams",
    "cdc_hop_delay",
    "cdc_transaction_delay",
    "spm_timing",
    "io_timing",
    "llc_hit_ctrl",
    "llc_hit_data",
    "llc_miss_ctrl",
    "hmc_ctrl",
    "hram_ctrl",
    "hram_word_time",
    "ms_miss_bound",
    "xbar_delay",
    "specialize_peripheral",
    "memory_params",
]

# Cycle counts of the single IPs
CDC_TX_CYCLES = 1
CDC_RX_CYCLES = 4
SPM_CTRL_READ_CYCLES = 6
SPM_CTRL_WRITE_CYCLES = 5
IO_CTRL_READ_CYCLES = 4
IO_CTRL_WRITE_CYCLES = 3
LLC_HIT_CTRL_CYCLES = 6
LLC_MISS_EXTRA_CYCLES = 2
HMC_FRONTEND_CYCLES = 5
HMC_BACKEND_CYCLES = 2
HRAM_COMMAND_CYCLES = 3
XBAR_PROPAGATION_CYCLES = 2


class HramDataMode(Enum):
    LITERAL = "literal"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class BoundBreakdown:
    "A duration bound with its labeled additive terms"

    terms: Tuple[Tuple[str, Duration], ...] = ()

    @classmethod
    def of(cls, *terms: Tuple[str, Duration]) -> "BoundBreakdown":
        return BoundBreakdown(tuple(terms))

    @property
    def total(self) -> Duration:
        return sum((x for _, x in self.terms), ZERO)

    def prefixed(self, prefix: str) -> "BoundBreakdown":
        return BoundBreakdown(tuple((f"{prefix}.{label}", x) for label, x in self.terms))

    def __add__(self, other: "BoundBreakdown") -> "BoundBreakdown":
        return BoundBreakdown(self.terms + other.terms)

    def to_dict(self) -> JsonData:
        return {"total_ps": self.total.to_ps(), "terms": [{"label": label, "ps": x.to_ps()} for label, x in self.terms]}

    def __str__(self) -> str:
        return " + ".join(f"{label}={x}" for label, x in self.terms) + f" = {self.total}"


@dataclass(frozen=True)
class MemoryParams:
    "Main memory subsystem parameters with resolved clocks"

    llc: ClockDomain
    hmc: ClockDomain
    hram: ClockDomain
    line_width: int
    dw_axi: int
    dw_hyper: int
    hram_access_latency_cycles: int
    fifo_depth: int


def memory_params(t: Topology, p: PeripheralModel) -> MemoryParams:
    return MemoryParams(
        llc=t.clock(p.llc_clock),
        hmc=t.clock(p.hmc_clock),
        hram=t.clock(p.hram_clock),
        line_width=p.line_width,
        dw_axi=p.dw_axi,
        dw_hyper=p.dw_hyper,
        hram_access_latency_cycles=p.hram_access_latency_cycles,
        fifo_depth=p.fifo_depth,
    )


def _cycles(n: int, clock: ClockDomain) -> Duration:
    return Duration.from_cycles(n, clock.period)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def cdc_hop_delay(tx: ClockDomain, rx: ClockDomain) -> Duration:
    "Delay of one CDC FIFO crossing: 1 TX cycle + 4 RX cycles"
    return _cycles(CDC_TX_CYCLES, tx) + _cycles(CDC_RX_CYCLES, rx)


def cdc_transaction_delay(ctrl: ClockDomain, periph: ClockDomain, kind: TransactionKind) -> BoundBreakdown:
    """
    Delay of a CDC FIFO over a whole transaction

    The request crosses toward the peripheral, the response (or the
    data) crosses back; writes send data together with the request.
    """
    return BoundBreakdown.of(
        ("request", cdc_hop_delay(ctrl, periph)),
        ("response", cdc_hop_delay(periph, ctrl)),
    )


def spm_timing(fifo_depth: int, clock: ClockDomain) -> PeripheralTimingModel:
    if fifo_depth < 1:
        raise AnalysisError(f"SPM fifo_depth must be at least 1, got {fifo_depth}")
    return PeripheralTimingModel(
        chi_read=fifo_depth,
        chi_write=fifo_depth,
        rho=1,
        theta=1,
        t_ctrl_read=_cycles(SPM_CTRL_READ_CYCLES, clock),
        t_ctrl_write=_cycles(SPM_CTRL_WRITE_CYCLES, clock),
        t_data=_cycles(1, clock),
    )


def io_timing(fifo_depth: int, clock: ClockDomain) -> PeripheralTimingModel:
    if fifo_depth < 1:
        raise AnalysisError(f"IO fifo_depth must be at least 1, got {fifo_depth}")
    return PeripheralTimingModel(
        chi_read=fifo_depth,
        chi_write=fifo_depth,
        rho=0,
        theta=0,
        t_ctrl_read=_cycles(IO_CTRL_READ_CYCLES, clock),
        t_ctrl_write=_cycles(IO_CTRL_WRITE_CYCLES, clock),
        t_data=_cycles(1, clock),
    )


def llc_hit_ctrl(llc: ClockDomain) -> Duration:
    return _cycles(LLC_HIT_CTRL_CYCLES, llc)


def llc_hit_data(llc: ClockDomain) -> Duration:
    return _cycles(1, llc)


def llc_miss_ctrl(llc: ClockDomain) -> Duration:
    "Hit control time plus the eviction/refill unit"
    return llc_hit_ctrl(llc) + _cycles(LLC_MISS_EXTRA_CYCLES, llc)


def hmc_ctrl(kind: TransactionKind, hmc: ClockDomain, hram: ClockDomain) -> BoundBreakdown:
    "Control time of the HyperRAM controller for one sub-transaction"
    terms: List[Tuple[str, Duration]] = [
        ("front-end", _cycles(HMC_FRONTEND_CYCLES, hmc)),
        ("cdc-to-back-end", cdc_hop_delay(hmc, hram)),
    ]
    if kind == TransactionKind.READ:
        terms.append(("cdc-to-front-end", cdc_hop_delay(hram, hmc)))
    terms.append(("back-end", _cycles(HMC_BACKEND_CYCLES, hram)))
    return BoundBreakdown(tuple(terms))


def hram_ctrl(hram: ClockDomain, access_latency_cycles: int) -> Duration:
    "Command cycles plus the fixed initial access latency"
    low, high = HRAM_LATENCY_RANGE
    if not low <= access_latency_cycles <= high:
        raise AnalysisError(f"HyperRAM access latency {access_latency_cycles} outside [{low}, {high}]")
    return _cycles(HRAM_COMMAND_CYCLES + access_latency_cycles, hram)


def hram_word_time(dw_axi: int, dw_hyper: int, hram: ClockDomain, mode: HramDataMode = HramDataMode.PHYSICAL) -> Duration:
    "Time to transfer one AXI word over the HyperBUS"
    if dw_axi <= 0 or dw_hyper <= 0:
        raise AnalysisError("data widths must be positive")
    words = _ceil_div(dw_axi, dw_hyper)
    if mode == HramDataMode.LITERAL:
        return _cycles(dw_hyper * words, hram)
    return _cycles(words, hram)


def ms_miss_bound(
    beta: int,
    with_evict: bool,
    params: MemoryParams,
    mode: HramDataMode = HramDataMode.PHYSICAL,
) -> Tuple[Duration, Fraction]:
    """
    Control time and per-word data time of the main memory on a miss

    :returns: (t_ctrl, t_data_per_word in rational picoseconds)
    """
    if beta < 1:
        raise AnalysisError(f"beta must be at least 1, got {beta}")
    lines = _ceil_div(beta, params.line_width)
    hram = hram_ctrl(params.hram, params.hram_access_latency_cycles)
    word = hram_word_time(params.dw_axi, params.dw_hyper, params.hram, mode)
    line_data = Fraction(params.line_width * lines, beta) * word.to_ps()
    t_ctrl = llc_miss_ctrl(params.llc) + lines * (hmc_ctrl(TransactionKind.READ, params.hmc, params.hram).total + hram)
    t_data = Fraction(llc_hit_data(params.llc).to_ps()) + line_data
    if with_evict:
        t_ctrl = t_ctrl + lines * (hmc_ctrl(TransactionKind.WRITE, params.hmc, params.hram).total + hram)
        t_data = t_data + line_data
    return t_ctrl, t_data


def xbar_delay(kind: TransactionKind, interferer_count_M: int, xbar: ClockDomain) -> BoundBreakdown:
    "Crossbar propagation plus round-robin contention against M-1 controllers"
    if interferer_count_M < 1:
        raise AnalysisError(f"M must be at least 1, got {interferer_count_M}")
    return BoundBreakdown.of(
        ("propagation", _cycles(XBAR_PROPAGATION_CYCLES, xbar)),
        ("contention", _cycles(interferer_count_M - 1, xbar)),
    )


def specialize_peripheral(
    t: Topology,
    p: PeripheralModel,
    beta: int,
    memory_case: Optional[MemoryCase] = None,
    mode: HramDataMode = HramDataMode.PHYSICAL,
) -> PeripheralTimingModel:
    "Instantiate the generic timing model for one peripheral"
    if p.kind == PeripheralKind.MAIN_MEMORY:
        if memory_case is None:
            raise AnalysisError(f"peripheral '{p.id}' is a main memory: a memory case is required")
    elif memory_case is not None:
        raise AnalysisError(f"peripheral '{p.id}' is not a main memory: memory case not allowed")
    clock = t.clock(p.clock)
    if p.kind == PeripheralKind.SPM:
        return spm_timing(p.fifo_depth, clock)
    elif p.kind == PeripheralKind.IO:
        return io_timing(p.fifo_depth, clock)
    elif p.kind == PeripheralKind.GENERIC:
        return cast(PeripheralTimingModel, p.timing)
    params = memory_params(t, p)
    if memory_case == MemoryCase.HIT:
        return PeripheralTimingModel(
            chi_read=p.fifo_depth,
            chi_write=p.fifo_depth,
            rho=1,
            theta=1,
            t_ctrl_read=llc_hit_ctrl(params.llc),
            t_ctrl_write=llc_hit_ctrl(params.llc),
            t_data=llc_hit_data(params.llc),
        )
    t_ctrl, t_data = ms_miss_bound(beta, memory_case == MemoryCase.MISS_REFILL_EVICT, params, mode)
    return PeripheralTimingModel(
        chi_read=p.fifo_depth,
        chi_write=p.fifo_depth,
        rho=0,
        theta=0,
        t_ctrl_read=t_ctrl,
        t_ctrl_write=t_ctrl,
        t_data=Duration.from_fraction(t_data),
        t_data_exact=t_data,
    )
