import dataclasses
import json

import pytest

from socbound.devices import BankPorts, Role
from socbound.duration import Duration
from socbound.model import MemoryCase, ScenarioError, TransactionKind, UnknownIdError
from socbound.simulator import (
    HorizonExceeded,
    NoMatchingRecords,
    build_sim,
    export_trace,
    max_outstanding,
    max_service,
    run,
)
from socbound.system import TransactionQuery, isolation_bound
from socbound.traffic import AddressPattern, KindMix, Mode, Scenario, Workload, parse_scenario, serialize_scenario
from tests import minimal, topology_1ns

READ = TransactionKind.READ
WRITE = TransactionKind.WRITE


def scenario(observed: str, **workloads: Workload) -> Scenario:
    return Scenario(observed=observed, workloads=tuple(workloads.items()))


def isolation(target: str, kind: str = "read", beta=(1,), count: int = 100, pattern=AddressPattern.SEQUENTIAL) -> Workload:
    return Workload(mode=Mode.ISOLATION, count=count, beta=tuple(beta), kind=KindMix(kind), target=target, pattern=pattern)


def bridge_free():
    t = topology_1ns()
    controllers = tuple(dataclasses.replace(x, bridge_path=()) for x in t.controllers)
    return dataclasses.replace(t, controllers=controllers, bridges=())


def test_spm_write_isolation():
    t = minimal()
    stats = run(build_sim(t, scenario("cpu", cpu=isolation("spm", "write")), 1))
    measured = max_service(stats, WRITE, 1)
    assert measured <= Duration.from_ns(8)
    assert measured >= Duration.from_ns(1)
    assert len(stats.main_records()) == 100
    assert max_outstanding(stats, "spm", WRITE) == 1


def test_spm_isolation_sound():
    t = topology_1ns()
    for controller in ("c0", "c1"):
        s = scenario(controller, **{controller: isolation("spm", "mixed", beta=(1, 2, 16, 256), count=200)})
        for seed in (1, 2, 3):
            stats = run(build_sim(t, s, seed))
            for (kind, beta), measured in stats.max_service_ps.items():
                q = TransactionQuery(controller=controller, peripheral="spm", kind=kind, beta=beta)
                assert measured <= isolation_bound(t, q).total.to_ps()


def test_io_read_isolation():
    t = topology_1ns()
    stats = run(build_sim(t, scenario("c1", c1=isolation("io", "read", beta=(4,))), 1))
    q = TransactionQuery(controller="c1", peripheral="io", kind=READ, beta=1)
    assert max_service(stats, READ, 1) <= isolation_bound(t, q).total
    for record in stats.main_records():
        assert record.beta == 1
        assert record.service_ps - record.xbar_traversal_ps <= 5000


def test_saturation_outstanding():
    t = minimal()
    workload = Workload(mode=Mode.SATURATION, count=200, beta=(16,), kind=KindMix.READ, target="spm", phi=64)
    stats = run(build_sim(t, scenario("cpu", cpu=workload), 1))
    assert max_outstanding(stats, "spm", READ) == 4
    assert stats.in_flight["cpu"][READ] >= 4


def test_saturation_llc():
    t = topology_1ns()
    workload = Workload(
        mode=Mode.SATURATION,
        count=200,
        beta=(16,),
        kind=KindMix.READ,
        target="main_memory",
        pattern=AddressPattern.HIT_LOOP,
        phi=64,
    )
    stats = run(build_sim(t, scenario("c1", c1=workload), 1))
    assert max_outstanding(stats, "main_memory", READ) == 8


def test_memory_cases():
    t = topology_1ns()
    expected = {
        AddressPattern.HIT_LOOP: MemoryCase.HIT,
        AddressPattern.COLD_MISS: MemoryCase.MISS_REFILL,
        AddressPattern.CONFLICT_EVICT: MemoryCase.MISS_REFILL_EVICT,
    }
    for pattern, case in expected.items():
        for kind in ("read", "write"):
            s = scenario("c1", c1=isolation("main_memory", kind, beta=(8,), count=40, pattern=pattern))
            stats = run(build_sim(t, s, 1))
            records = stats.main_records()
            assert len(records) == 40
            assert set(x.memory_case for x in records) == {case}
            for record in records:
                q = TransactionQuery(
                    controller="c1", peripheral="main_memory", kind=record.kind, beta=8, memory_case=record.memory_case
                )
                assert record.service_ps <= isolation_bound(t, q).total.to_ps()
            assert case in stats.memory_cases["main_memory"]


def test_memory_miss_sound():
    t = topology_1ns()
    for pattern in (AddressPattern.COLD_MISS, AddressPattern.CONFLICT_EVICT):
        s = scenario("c0", c0=isolation("main_memory", "mixed", beta=(1, 4, 16, 32), count=100, pattern=pattern))
        for seed in (1, 2):
            stats = run(build_sim(t, s, seed))
            for record in stats.main_records():
                q = TransactionQuery(
                    controller="c0",
                    peripheral="main_memory",
                    kind=record.kind,
                    beta=record.beta,
                    memory_case=record.memory_case,
                )
                assert record.service_ps <= isolation_bound(t, q).total.to_ps()


def test_determinism():
    t = topology_1ns()
    s = scenario(
        "c0",
        c0=isolation("spm", "mixed", beta=(1, 16, 256)),
        c1=Workload(mode=Mode.INTERFERENCE, beta=(16,), kind=KindMix.MIXED, target="spm", phi=4),
    )
    a = run(build_sim(t, s, 7))
    b = run(build_sim(t, s, 7))
    assert a.trace_hash == b.trace_hash
    assert list(export_trace(a)) == list(export_trace(b))
    assert parse_scenario(serialize_scenario(s)) == s


def test_interference_plateau():
    t = bridge_free()
    measured = []
    for phi in (16, 32):
        s = scenario(
            "c0",
            c0=isolation("spm", "read", beta=(16,), count=200),
            c1=Workload(mode=Mode.INTERFERENCE, beta=(16,), kind=KindMix.MIXED, target="spm", phi=phi),
        )
        stats = run(build_sim(t, s, 1))
        measured.append(max_service(stats, READ, 16))
    assert measured[0] == measured[1]


def test_trace_export():
    t = minimal()
    stats = run(build_sim(t, scenario("cpu", cpu=isolation("spm", count=3)), 1))
    lines = list(export_trace(stats))
    assert len(lines) == 3
    record = json.loads(lines[0])
    assert list(record) == ["id", "kind", "beta", "issuer", "target", "issued_ps", "accepted_ps", "completed_ps"]
    assert record["issuer"] == "cpu"
    assert record["target"] == "spm"
    assert record["issued_ps"] <= record["accepted_ps"] <= record["completed_ps"]
    assert all(x.role == Role.MAIN for x in stats.records)


def test_zero_transactions():
    t = minimal()
    stats = run(build_sim(t, scenario("cpu", cpu=isolation("spm", count=0)), 1))
    assert stats.records == ()
    assert stats.events == 0
    stats = run(build_sim(t, scenario("cpu", cpu=isolation("spm", count=5)), 1), max_transactions=0)
    assert stats.events == 0


def test_horizon():
    t = minimal()
    with pytest.raises(HorizonExceeded) as ex:
        run(build_sim(t, scenario("cpu", cpu=isolation("spm")), 1), horizon=Duration.from_ps(1))
    assert ex.value.stats.incomplete <= 1
    assert len(ex.value.stats.records) == 0


def test_lookup_errors():
    t = minimal()
    stats = run(build_sim(t, scenario("cpu", cpu=isolation("spm", count=3)), 1))
    with pytest.raises(NoMatchingRecords):
        max_service(stats, READ, 16)
    with pytest.raises(UnknownIdError):
        max_outstanding(stats, "dram", READ)


def test_invalid_scenario():
    t = minimal()
    with pytest.raises(ScenarioError):
        build_sim(t, scenario("cpu", cpu=isolation("dram")), 1)
    with pytest.raises(ScenarioError):
        build_sim(t, scenario("gpu", cpu=isolation("spm")), 1)
    with pytest.raises(ScenarioError):
        build_sim(t, scenario("cpu", cpu=Workload(mode=Mode.INTERFERENCE, target="spm")), 1)


def test_bank_ports():
    banks = BankPorts(4, 0x1000, 1000)
    assert [banks.bank_of(0x1000 + 8 * i) for i in range(6)] == [0, 1, 2, 3, 0, 1]
    assert banks.transfer(0x1000, 1, READ, 0) == 1000
    assert banks.transfer(0x1008, 1, READ, 0) == 1000
    assert banks.stalls == 0
    # bank 0 read port busy until 1000
    assert banks.transfer(0x1020, 1, READ, 0) == 2000
    assert banks.stalls == 1
    assert banks.transfer(0x1000, 1, WRITE, 0) == 1000
    assert banks.transfer(0x1008, 4, READ, 1000) == 5000
    assert banks.stalls == 1


def test_spm_banks():
    t = bridge_free()
    base = t.peripheral("spm").address.base
    second = base + t.peripheral("spm").address.size // 2
    interferer = Workload(mode=Mode.INTERFERENCE, beta=(16,), kind=KindMix.MIXED, target="spm")
    s = scenario("c0", c0=isolation("spm", "mixed", beta=(1, 16), count=200), c1=interferer)
    spm = dataclasses.replace(t.peripheral("spm"), bank_count=3)
    other = dataclasses.replace(t, peripherals=tuple(spm if x.id == "spm" else x for x in t.peripherals))
    # both slices start on the same bank with 16 banks, on different ones with 3
    assert BankPorts(16, base, 1).bank_of(base) == BankPorts(16, base, 1).bank_of(second)
    assert BankPorts(3, base, 1).bank_of(base) != BankPorts(3, base, 1).bank_of(second)
    same_bank = run(build_sim(t, s, 1))
    other_bank = run(build_sim(other, s, 1))
    assert same_bank.bank_stalls == other_bank.bank_stalls == {"spm": 0}
    assert same_bank.trace_hash == other_bank.trace_hash
    assert len(same_bank.main_records("c1")) > 0
