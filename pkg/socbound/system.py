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
End-to-end worst-case response time of a single transaction

A transaction of controller C_i toward peripheral P_j is bounded by its
isolation time plus the delay of every same-type and cross-type
transaction that can be served before it.
"""

import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .components import (
    BoundBreakdown,
    HramDataMode,
    cdc_transaction_delay,
    specialize_peripheral,
    xbar_delay,
)
from .duration import Duration
from .model import (
    AnalysisError,
    BridgeKind,
    JsonData,
    MemoryCase,
    PeripheralKind,
    Topology,
    TransactionKind,
)
from .topology import interfering_set

__all__ = [
    "TransactionQuery",
    "WcrtBound",
    "isolation_bound",
    "same_type_count",
    "same_type_interference_count",
    "same_type_interference_count_alternate",
    "cross_type_interference_count",
    "per_interferer_delay",
    "wcrt",
    "pessimism_pct",
    "fill_interferer_beta",
    "with_phi",
]

logger = logging.getLogger("socbound.system")


@dataclass(frozen=True)
class TransactionQuery:
    controller: str
    peripheral: str
    kind: TransactionKind
    beta: int
    interferer_beta: Optional[int] = None
    memory_case: Optional[MemoryCase] = None
    V: int = 1

    def to_dict(self) -> JsonData:
        return {
            "controller": self.controller,
            "peripheral": self.peripheral,
            "kind": self.kind.value,
            "beta": self.beta,
            "interferer_beta": self.interferer_beta,
            "memory_case": self.memory_case.value if self.memory_case else None,
            "V": self.V,
        }


@dataclass(frozen=True)
class WcrtBound:
    isolation: Duration
    same_type_count: int
    cross_type_count: int
    per_interferer_delay: Duration
    total: Duration
    breakdown: BoundBreakdown
    warnings: Tuple[str, ...] = ()

    def to_dict(self) -> JsonData:
        return {
            "isolation_ps": self.isolation.to_ps(),
            "S": self.same_type_count,
            "U": self.cross_type_count,
            "delta_ps": self.per_interferer_delay.to_ps(),
            "total_ps": self.total.to_ps(),
            "breakdown": self.breakdown.to_dict(),
            "warnings": list(self.warnings),
        }


def _check_query(t: Topology, q: TransactionQuery) -> None:
    controller = t.controller(q.controller)
    t.peripheral(q.peripheral)
    if q.beta < 1:
        raise AnalysisError(f"beta must be at least 1, got {q.beta}")
    if q.interferer_beta is not None and q.interferer_beta < 1:
        raise AnalysisError(f"interferer beta must be at least 1, got {q.interferer_beta}")
    if not 1 <= q.V <= controller.phi(q.kind):
        raise AnalysisError(f"V must be within [1, {controller.phi(q.kind)}], got {q.V}")


def _clamped(t: Topology, q: TransactionQuery) -> TransactionQuery:
    "IO subsystem does not support bursts"
    if t.peripheral(q.peripheral).kind != PeripheralKind.IO:
        return q
    if q.beta > 1 or (q.interferer_beta or 1) > 1:
        logger.debug("burst length clamped to 1 for IO target %s", q.peripheral)
    return dataclasses.replace(q, beta=1, interferer_beta=1 if q.interferer_beta is not None else None)


def fill_interferer_beta(t: Topology, q: TransactionQuery) -> TransactionQuery:
    "Use the largest configured burst of the interferers when beta_k is unspecified"
    if q.interferer_beta is not None:
        return _clamped(t, q)
    interferers = interfering_set(t, q.controller, q.peripheral)
    beta_k = max((t.controller(x).max_beta for x in interferers), default=q.beta)
    return _clamped(t, dataclasses.replace(q, interferer_beta=beta_k))


def with_phi(t: Topology, phi: Dict[str, int]) -> Topology:
    "Return a topology with the outstanding limits of some controllers overridden (both kinds)"
    controllers = tuple(
        dataclasses.replace(x, phi_read=phi[x.id], phi_write=phi[x.id]) if x.id in phi else x for x in t.controllers
    )
    return dataclasses.replace(t, controllers=controllers)


def _xbar(t: Topology, q: TransactionQuery) -> BoundBreakdown:
    m = len(interfering_set(t, q.controller, q.peripheral)) + 1
    return xbar_delay(q.kind, m, t.xbar_clock)


def isolation_bound(t: Topology, q: TransactionQuery, mode: HramDataMode = HramDataMode.PHYSICAL) -> BoundBreakdown:
    "Peripheral service, bridges on the controller path and crossbar"
    _check_query(t, q)
    q = _clamped(t, q)
    peripheral = t.peripheral(q.peripheral)
    timing = specialize_peripheral(t, peripheral, q.beta, q.memory_case, mode)
    result = BoundBreakdown.of(
        (f"{peripheral.id}.control", timing.t_ctrl(q.kind)),
        (f"{peripheral.id}.data", timing.data_time(q.beta)),
    )
    for bridge in t.controller_bridges(q.controller):
        if bridge.kind == BridgeKind.CDC:
            delay = cdc_transaction_delay(t.clock(bridge.tx_clock), t.clock(bridge.rx_clock), q.kind)
            result = result + delay.prefixed(bridge.id)
        else:
            result = result + BoundBreakdown.of((bridge.id, bridge.fixed_delay(q.kind)))
    return result + _xbar(t, q).prefixed("crossbar")


def same_type_count(phi: Sequence[int], chi: int, V: int = 1) -> Tuple[int, int]:
    """
    Both arms of the same-type interference count

    :returns: (outstanding arm, arbitration arm)
    """
    return V - 1 + sum(phi), V - 1 + chi + V * len(phi)


def same_type_interference_count(t: Topology, q: TransactionQuery) -> int:
    "Same-type transactions served before the one under analysis"
    _check_query(t, q)
    interferers = sorted(interfering_set(t, q.controller, q.peripheral))
    phi = [t.controller(x).phi(q.kind) for x in interferers]
    chi = t.peripheral(q.peripheral).chi(q.kind)
    return min(same_type_count(phi, chi, q.V))


def same_type_interference_count_alternate(t: Topology, q: TransactionQuery) -> int:
    "Variant bounding the arbitration arm with the outstanding limit of C_i"
    _check_query(t, q)
    interferers = sorted(interfering_set(t, q.controller, q.peripheral))
    phi = [t.controller(x).phi(q.kind) for x in interferers]
    chi = t.peripheral(q.peripheral).chi(q.kind)
    return min(sum(phi), chi + t.controller(q.controller).phi(q.kind) * len(phi))


def cross_type_interference_count(S: int, theta: int) -> int:
    "Transactions of the other type served before the one under analysis"
    if S < 0:
        raise AnalysisError(f"S must be non-negative, got {S}")
    return (S + 1) * (1 - theta)


def per_interferer_delay(t: Topology, q: TransactionQuery, mode: HramDataMode = HramDataMode.PHYSICAL) -> BoundBreakdown:
    "Maximum delay added by one interfering transaction"
    _check_query(t, q)
    q = fill_interferer_beta(t, q)
    beta_k = q.interferer_beta or q.beta
    peripheral = t.peripheral(q.peripheral)
    timing = specialize_peripheral(t, peripheral, beta_k, q.memory_case, mode)
    # mixed read/write sequences: worst control time
    control = timing.t_ctrl_max if timing.theta == 0 else timing.t_ctrl(q.kind)
    result = _xbar(t, q).prefixed("crossbar")
    if timing.rho == 0:
        result = result + BoundBreakdown.of((f"{peripheral.id}.control", control))
    return result + BoundBreakdown.of((f"{peripheral.id}.data", timing.data_time(beta_k)))


def wcrt(t: Topology, q: TransactionQuery, mode: HramDataMode = HramDataMode.PHYSICAL) -> WcrtBound:
    "Worst-case response time under interference"
    _check_query(t, q)
    q = fill_interferer_beta(t, q)
    peripheral = t.peripheral(q.peripheral)
    isolation = isolation_bound(t, q, mode)
    S = same_type_interference_count(t, q)
    theta = specialize_peripheral(t, peripheral, q.beta, q.memory_case, mode).theta
    U = cross_type_interference_count(S, theta)
    delta = per_interferer_delay(t, q, mode)
    breakdown = isolation.prefixed("isolation")
    if S + U:
        breakdown = breakdown + BoundBreakdown.of(("interference", delta.total * (S + U)))
    warnings: Tuple[str, ...] = ()
    if q.V > 1 and t.controller(q.controller).bridge_path:
        message = f"V = {q.V} with bridges on the path of '{q.controller}': queues buffered in bridges are not accounted"
        logger.warning(message)
        warnings = (message,)
    return WcrtBound(
        isolation=isolation.total,
        same_type_count=S,
        cross_type_count=U,
        per_interferer_delay=delta.total,
        total=breakdown.total,
        breakdown=breakdown,
        warnings=warnings,
    )


def pessimism_pct(bound: Duration, measured: Duration) -> Fraction:
    "Overestimation of a bound in percent, negative on a violation"
    if measured.to_ps() == 0:
        raise AnalysisError("measured duration is zero")
    return Fraction(100 * (bound.to_ps() - measured.to_ps()), measured.to_ps())
