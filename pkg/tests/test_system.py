import dataclasses
from fractions import Fraction

import pytest

from socbound.duration import Duration
from socbound.model import AnalysisError, MemoryCase, TransactionKind, UnknownIdError
from socbound.system import (
    TransactionQuery,
    cross_type_interference_count,
    fill_interferer_beta,
    isolation_bound,
    per_interferer_delay,
    pessimism_pct,
    same_type_count,
    same_type_interference_count,
    same_type_interference_count_alternate,
    wcrt,
    with_phi,
)
from tests import minimal, topology_1ns

READ = TransactionKind.READ
WRITE = TransactionKind.WRITE

# S  theta  U
CROSS_TYPE_VECTORS = """
  4   1     0
  4   0     5
  0   0     1
"""

# bound  measured  pessimism
PESSIMISM_VECTORS = """
  110    100       10
  100    100       0
  99     100       -1
"""


def ns(value: int) -> Duration:
    return Duration.from_ns(value)


def query(**kwargs) -> TransactionQuery:
    data = dict(controller="c0", peripheral="spm", kind=READ, beta=16)
    data.update(kwargs)
    return TransactionQuery(**data)


def test_isolation_bound():
    t = topology_1ns()
    assert isolation_bound(t, query()).total == ns(35)
    q = TransactionQuery(controller="cpu", peripheral="spm", kind=WRITE, beta=1)
    assert isolation_bound(minimal(), q).total == ns(8)
    q = query(peripheral="main_memory", beta=8, memory_case=MemoryCase.MISS_REFILL)
    bound = isolation_bound(t, q)
    assert bound.total == ns(77)
    assert sum((x for _, x in bound.terms), Duration()) == bound.total
    labels = [label for label, _ in bound.terms]
    assert "cdc0.request" in labels and "crossbar.contention" in labels


def test_isolation_errors():
    t = topology_1ns()
    with pytest.raises(AnalysisError):
        isolation_bound(t, query(peripheral="main_memory"))
    with pytest.raises(AnalysisError):
        isolation_bound(t, query(beta=0))
    with pytest.raises(UnknownIdError):
        isolation_bound(t, query(controller="gpu"))
    with pytest.raises(AnalysisError):
        isolation_bound(t, query(V=5))


def test_isolation_monotone_in_beta():
    t = topology_1ns()
    for kind in TransactionKind:
        bounds = [isolation_bound(t, query(kind=kind, beta=2**i)).total for i in range(9)]
        assert bounds == sorted(bounds)


def test_same_type_count():
    t = topology_1ns()
    assert same_type_interference_count(t, query()) == 4
    q = TransactionQuery(controller="cpu", peripheral="spm", kind=READ, beta=1)
    assert same_type_interference_count(minimal(), q) == 0
    assert min(same_type_count([8], 4, 3)) == 9
    assert same_type_count([8], 4, 3) == (10, 9)
    assert same_type_interference_count(with_phi(t, {"c1": 8}), query(V=3)) == 9
    assert same_type_interference_count_alternate(t, query()) == 4
    assert same_type_interference_count_alternate(with_phi(t, {"c0": 1, "c1": 16}), query()) == 5


def test_cross_type_count():
    for S, theta, U in [[int(v) for v in x.split()] for x in CROSS_TYPE_VECTORS.split("\n") if x.strip()]:
        assert cross_type_interference_count(S, theta) == U
    with pytest.raises(AnalysisError):
        cross_type_interference_count(-1, 0)


def test_per_interferer_delay():
    t = topology_1ns()
    assert per_interferer_delay(t, query(interferer_beta=16)).total == ns(19)
    assert per_interferer_delay(t, query(peripheral="io", beta=1, interferer_beta=1)).total == ns(8)
    q = query(peripheral="main_memory", beta=8, interferer_beta=8, memory_case=MemoryCase.MISS_REFILL)
    assert per_interferer_delay(t, q).total == ns(67)


def test_fill_interferer_beta():
    t = topology_1ns()
    assert fill_interferer_beta(t, query()).interferer_beta == 256
    assert fill_interferer_beta(t, query(interferer_beta=8)).interferer_beta == 8
    assert fill_interferer_beta(t, query(peripheral="io", beta=4)) == query(peripheral="io", beta=1, interferer_beta=1)
    q = TransactionQuery(controller="cpu", peripheral="spm", kind=READ, beta=4)
    assert fill_interferer_beta(minimal(), q).interferer_beta == 4


def test_wcrt():
    t = topology_1ns()
    bound = wcrt(t, query(interferer_beta=16))
    assert (bound.isolation, bound.same_type_count, bound.cross_type_count) == (ns(35), 4, 0)
    assert bound.per_interferer_delay == ns(19)
    assert bound.total == ns(111)
    assert bound.to_dict()["total_ps"] == 111000
    q = TransactionQuery(controller="cpu", peripheral="spm", kind=READ, beta=16)
    assert wcrt(minimal(), q).total == isolation_bound(minimal(), q).total
    q = query(peripheral="main_memory", beta=8, interferer_beta=8, memory_case=MemoryCase.MISS_REFILL)
    bound = wcrt(t, q)
    assert (bound.same_type_count, bound.cross_type_count) == (4, 5)
    assert bound.total == ns(680)


def test_wcrt_warning():
    t = topology_1ns()
    assert wcrt(t, query(V=2)).warnings
    assert not wcrt(t, query(controller="c1", V=2)).warnings


def test_wcrt_monotone():
    t = topology_1ns()
    base = wcrt(t, query(interferer_beta=16)).total
    assert wcrt(with_phi(t, {"c1": 8}), query(interferer_beta=16)).total >= base
    assert wcrt(t, query(interferer_beta=32)).total >= base
    assert wcrt(t, query(interferer_beta=16, beta=32)).total >= base
    assert wcrt(t, query(interferer_beta=16, V=2)).total >= base
    three = dataclasses.replace(t, controllers=t.controllers + (dataclasses.replace(t.controllers[1], id="c2"),))
    assert wcrt(three, query(interferer_beta=16)).total >= base
    for case in MemoryCase:
        q = query(peripheral="main_memory", interferer_beta=16, memory_case=case)
        assert wcrt(t, q).total >= isolation_bound(t, q).total


def test_pessimism():
    for bound, measured, expected in [[int(v) for v in x.split()] for x in PESSIMISM_VECTORS.split("\n") if x.strip()]:
        assert pessimism_pct(ns(bound), ns(measured)) == expected
    assert pessimism_pct(ns(3), ns(2)) == Fraction(50)
    with pytest.raises(AnalysisError):
        pessimism_pct(ns(1), Duration())
