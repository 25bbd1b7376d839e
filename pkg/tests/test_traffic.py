import pytest

from socbound.devices import Role
from socbound.model import ScenarioError, TransactionKind
from socbound.traffic import (
    AddressGenerator,
    AddressPattern,
    KindMix,
    Mode,
    Workload,
    filler_count,
    load_scenario,
    parse_scenario,
    serialize_scenario,
    validate_scenario,
)
from tests import REFERENCE, reference, topology_1ns

SCENARIO = """
{
  "scenario": {
    "observed": "cva6",
    "seed": 3,
    "controllers": {
      "cva6": {"mode": "isolation", "count": 10, "beta": {"uniform": [1, 16]}, "kind": "mixed", "target": "spm"},
      "cluster": {"mode": "interference", "beta": 16, "target": "spm", "phi": 8}
    }
  }
}
"""

# ways  fillers
FILLER_VECTORS = """
   8     2
   4     2
   6     3
   12    4
   1     1
"""


def test_parse():
    s = parse_scenario(SCENARIO)
    assert s.observed == "cva6"
    assert s.seed == 3
    assert s.workload("cva6").beta == (1, 16)
    assert s.workload("cva6").kind == KindMix.MIXED
    assert s.workload("cluster").phi == 8
    assert s.workload("cluster").kind == KindMix.READ
    assert s.workload("cluster").pattern == AddressPattern.SEQUENTIAL
    assert s.workload("gpu").mode == Mode.IDLE
    assert parse_scenario(serialize_scenario(s)) == s
    assert s.with_count(5).workload("cva6").count == 5
    assert s.with_count(5).workload("cluster").count == 0
    validate_scenario(reference(), s)


def test_parse_errors():
    with pytest.raises(ScenarioError):
        parse_scenario(SCENARIO.replace('"beta": 16', '"beta": 0'))
    with pytest.raises(ScenarioError):
        parse_scenario(SCENARIO.replace('"mode": "interference"', '"mode": "burst"'))
    with pytest.raises(ScenarioError):
        parse_scenario(SCENARIO.replace('"phi": 8', '"phi": 8, "priority": 1'))
    with pytest.raises(ScenarioError):
        parse_scenario(SCENARIO.replace('"beta": {"uniform": [1, 16]}', '"beta": {"uniform": []}'))


def test_validate_errors():
    t = reference()
    with pytest.raises(ScenarioError):
        validate_scenario(t, parse_scenario(SCENARIO.replace('"observed": "cva6"', '"observed": "cluster"')))
    with pytest.raises(ScenarioError):
        validate_scenario(t, parse_scenario(SCENARIO.replace('"target": "spm", "phi"', '"target": "dram", "phi"')))
    with pytest.raises(ScenarioError):
        validate_scenario(t, parse_scenario(SCENARIO.replace('"phi": 8', '"phi": 0')))


def test_sample_scenarios():
    t = reference()
    for path in sorted((REFERENCE.parent / "scenarios").glob("*.json")):
        validate_scenario(t, load_scenario(path))


def test_filler_count():
    for ways, fillers in [[int(v) for v in x.split()] for x in FILLER_VECTORS.split("\n") if x.strip()]:
        assert filler_count(ways) == fillers
        assert ways % (fillers + 1) != 0


def test_address_generator():
    t = topology_1ns()
    memory = t.peripheral("main_memory")
    workload = Workload(mode=Mode.ISOLATION, count=1, beta=(16,), target="main_memory", pattern=AddressPattern.HIT_LOOP)
    generator = AddressGenerator(memory, workload, 1, 2)
    (warmup,) = generator.prelude()
    assert warmup.role == Role.WARMUP
    assert warmup.beta == 16
    (request,) = generator.next(TransactionKind.WRITE, 16)
    assert request.address == warmup.address
    assert memory.address.contains(request.address)

    workload = Workload(mode=Mode.ISOLATION, count=1, target="main_memory", pattern=AddressPattern.CONFLICT_EVICT)
    generator = AddressGenerator(memory, workload, 0, 2)
    assert len(generator.prelude()) == memory.way_count
    requests = generator.next(TransactionKind.READ, 8)
    assert [x.role for x in requests] == [Role.FILLER, Role.FILLER, Role.MAIN]
    assert [x.kind for x in requests] == [TransactionKind.WRITE, TransactionKind.WRITE, TransactionKind.READ]
    assert len(set(x.address for x in requests)) == 3
    assert generator.next(TransactionKind.WRITE, 8)[0].role == Role.MAIN

    io = t.peripheral("io")
    generator = AddressGenerator(io, Workload(mode=Mode.ISOLATION, target="io"), 0, 2)
    (request,) = generator.next(TransactionKind.READ, 16)
    assert request.beta == 1
    assert io.address.contains(request.address)

    spm = t.peripheral("spm")
    generator = AddressGenerator(spm, Workload(mode=Mode.ISOLATION, target="spm"), 1, 2)
    addresses = [generator.next(TransactionKind.READ, 256)[0].address for _ in range(1000)]
    assert all(spm.address.base + spm.address.size // 2 <= x < spm.address.end for x in addresses)
