import dataclasses
import logging
import re

import pytest

from socbound.duration import Duration
from socbound.model import (
    ClockDomain,
    ConfigSyntaxError,
    DuplicateIdError,
    MissingFieldError,
    PeripheralKind,
    TopologyError,
    UnknownFieldError,
)
from socbound.topology import interfering_set, parse_topology, serialize_topology, validate_topology
from socbound.traffic import parse_scenario, validate_scenario
from tests import TESTS_DIR, minimal, reference, topology_1ns

DUPLICATE = """
{
  "clocks": [{"name": "clk", "period_ps": 1000}],
  "controllers": [{"id": "cpu", "clock": "clk", "phi_read": 1, "phi_write": 1}],
  "crossbar": {"clock": "clk"},
  "peripherals": [
    {"id": "spm", "kind": "spm", "clock": "clk", "address": {"base": 0, "size": 4096}},
    {"id": "spm", "kind": "io", "clock": "clk", "address": {"base": 4096, "size": 4096}}
  ]
}
"""


def test_parse_minimal():
    t = minimal()
    assert len(t.controllers) == 1
    assert len(t.peripherals) == 1
    assert t.peripheral("spm").fifo_depth == 4
    assert t.peripheral("spm").address.base == 0x10000000
    assert t.crossbar.d_tab == 16
    assert validate_topology(t).ok


def test_parse_reference():
    t = reference()
    assert [x.kind for x in t.peripherals] == [PeripheralKind.SPM, PeripheralKind.IO, PeripheralKind.MAIN_MEMORY]
    assert t.controller_bridges("cluster")[0].id == "cdc_cluster"
    assert t.peripheral_at(0x80001000).id == "main_memory"
    result = validate_topology(t)
    assert result.ok
    assert not result.errors


def test_round_trip():
    for t in (minimal(), reference(), topology_1ns()):
        assert parse_topology(serialize_topology(t)) == t


def test_duplicate_id():
    with pytest.raises(DuplicateIdError) as ex:
        parse_topology(DUPLICATE)
    assert ex.value.id == "spm"


def test_syntax_errors():
    with pytest.raises(ConfigSyntaxError) as ex:
        parse_topology('{\n  "clocks": [,]\n}')
    assert ex.value.line == 2
    with pytest.raises(UnknownFieldError):
        parse_topology(DUPLICATE.replace('"phi_write": 1', '"phi_write": 1, "color": "red"'))
    with pytest.raises(MissingFieldError):
        parse_topology(DUPLICATE.replace('"crossbar": {"clock": "clk"},', ""))
    with pytest.raises(TopologyError):
        parse_topology(DUPLICATE.replace('"kind": "io"', '"kind": "dram"'))


def test_validate_d_tab():
    t = topology_1ns()
    t = dataclasses.replace(t, crossbar=dataclasses.replace(t.crossbar, d_tab=2))
    t = dataclasses.replace(
        t, peripherals=tuple(dataclasses.replace(x, fifo_depth=8) if x.id == "spm" else x for x in t.peripherals)
    )
    result = validate_topology(t)
    assert not result.ok
    assert "W-table smaller than peripheral write parallelism" in str(result)


def test_validate_overlap():
    t = topology_1ns()
    spm = t.peripheral("spm")
    io = dataclasses.replace(t.peripheral("io"), address=dataclasses.replace(spm.address, base=spm.address.base + 16))
    t = dataclasses.replace(t, peripherals=tuple(io if x.id == "io" else x for x in t.peripherals))
    result = validate_topology(t)
    assert not result.ok
    assert "'spm'" in str(result) and "'io'" in str(result)


def test_interfering_set():
    t = reference()
    assert interfering_set(t, "cva6", "spm") == {"cluster"}
    assert interfering_set(minimal(), "cpu", "spm") == set()
    controllers = tuple(dataclasses.replace(t.controllers[0], id=f"m{i}", bridge_path=()) for i in range(4))
    t = dataclasses.replace(t, controllers=controllers)
    assert interfering_set(t, "m0", "io") == {"m1", "m2", "m3"}


def test_readme_examples():
    text = (TESTS_DIR.parent / "README.md").read_text()
    topology, scenario = re.findall(r"```json\n(.*?)```", text, re.S)
    t = parse_topology(topology)
    assert validate_topology(t).ok
    assert t.peripheral("spm").address.base == 0x10000000
    validate_scenario(reference(), parse_scenario(scenario))


def test_warnings_are_returned(caplog):
    caplog.set_level(logging.DEBUG)
    t = minimal()
    spm = dataclasses.replace(t.peripheral("spm"), clock="slow")
    t = dataclasses.replace(t, clocks=t.clocks + (ClockDomain("slow", Duration.from_ps(2000)),), peripherals=(spm,))
    result = validate_topology(t)
    assert result.ok
    assert len(result.warnings) == 1
    assert result.warnings[0].offending_id == "spm"
    assert not caplog.records
