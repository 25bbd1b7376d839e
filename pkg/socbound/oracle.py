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
Exhaustive exploration of the same-type arbitration game

Interfering controllers start with some transactions already accepted
by the peripheral (at most chi overall, at most phi each) and may issue
the rest of their outstanding budget while C_i presents its V
transactions. The round-robin mux grants one request at a time and only
while fewer than chi transactions are inside the peripheral; the
adversary picks the initial pointer, the port order, when the peripheral
completes a transaction and which interferers request at every grant.
"""

import itertools
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .model import SocBoundError

__all__ = ["InstanceTooLarge", "brute_force_interference_count", "DEFAULT_LIMIT"]

DEFAULT_LIMIT = 20


class InstanceTooLarge(SocBoundError):
    pass


def _allocations(phi: Sequence[int], chi: int) -> Iterator[Tuple[int, ...]]:
    "Transactions of every interferer already inside the peripheral"
    for inside in itertools.product(*(range(x + 1) for x in phi)):
        if sum(inside) <= chi:
            yield inside


@lru_cache(maxsize=None)
def _play(budgets: Tuple[int, ...], inside: int, chi: int, pointer: int, left: int) -> int:
    """
    Maximum interfering grants before the left-th next grant of C_i

    Ports are numbered 0 (C_i) to len(budgets); the pointer is the last granted port.
    """
    best = -1
    if inside:
        best = _play(budgets, inside - 1, chi, pointer, left)
    if inside == chi:
        return best
    best = max(best, 0 if left == 1 else _play(budgets, inside + 1, chi, 0, left - 1))
    # any interferer before C_i in round-robin order can win alone
    n = len(budgets) + 1
    port = (pointer + 1) % n
    while port != 0:
        if budgets[port - 1]:
            rest = budgets[: port - 1] + (budgets[port - 1] - 1,) + budgets[port:]
            best = max(best, 1 + _play(rest, inside + 1, chi, port, left))
        port = (port + 1) % n
    return best


def _grants(budgets: Tuple[int, ...], inside: int, chi: int, V: int) -> int:
    "Maximum interfering grants before the V-th grant of C_i, any initial pointer"
    return max(_play(budgets, inside, chi, pointer, V) for pointer in range(len(budgets) + 1))


def brute_force_interference_count(phi_list: Sequence[int], chi: int, V: int = 1, limit: int = DEFAULT_LIMIT) -> int:
    """
    True maximum of same-type transactions served before the V-th
    transaction of C_i, including the V - 1 preceding ones of C_i

    :raises InstanceTooLarge: when sum(phi) + chi + V exceeds the limit
    """
    if chi < 1 or V < 1 or any(x < 0 for x in phi_list):
        raise ValueError("chi and V must be positive, phi must not be negative")
    if sum(phi_list) + chi + V > limit:
        raise InstanceTooLarge(f"instance too large for exhaustive search: {sum(phi_list) + chi + V} > {limit}")
    best = 0
    orders: List[Tuple[int, ...]] = sorted(set(itertools.permutations(phi_list)))
    for order in orders:
        for inside in _allocations(order, chi):
            budgets = tuple(x - y for x, y in zip(order, inside))
            best = max(best, sum(inside) + _grants(budgets, sum(inside), chi, V) + V - 1)
    return best
