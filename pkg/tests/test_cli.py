import json
import logging
import shlex
from pathlib import Path

import socbound.cli
import socbound.topology
from socbound.cli import EXIT_CONFIG_ERROR, EXIT_HORIZON, EXIT_SUCCESS, EXIT_VIOLATION, main, resolve_topology
from tests import MINIMAL, REFERENCE

SCENARIOS = REFERENCE.parent / "scenarios"
EXIT_PARSER_ERROR = 2

# the scratchpad runs on a slower clock than the crossbar
SLOW_SPM = """
{
  "clocks": [{"name": "clk", "period_ps": 1000}, {"name": "slow", "period_ps": 2000}],
  "controllers": [{"id": "cpu", "clock": "clk", "phi_read": 1, "phi_write": 1}],
  "crossbar": {"clock": "clk"},
  "peripherals": [{"id": "spm", "kind": "spm", "clock": "slow"}],
  "memory_map": [{"peripheral": "spm", "base": "0x10000000", "size": "0x20000"}]
}
"""


def r(cmd: str, exp=EXIT_SUCCESS, topology: Path = REFERENCE):
    prefix = f"socbound --topology {topology} "
    assert main(shlex.split(prefix + cmd)) == exp


def test_analyze():
    r("analyze -c cva6 -p spm")
    r("analyze -c cva6 -p spm -k read -b 1 -b 16 --json")
    r("analyze -c cluster -p io -b 4")
    r("analyze -c cva6 -p main_memory -m miss_refill_evict --phi cluster=2 --V 2")
    r("--hram-mode literal analyze -c cva6 -p main_memory -m miss_refill")
    r("analyze -c cpu -p spm", topology=MINIMAL)


def test_analyze_errors():
    r("analyze -c cva6 -p main_memory", EXIT_CONFIG_ERROR)
    r("analyze -c gpu -p spm", EXIT_CONFIG_ERROR)
    r("analyze -c cva6 -p spm --phi cluster", EXIT_PARSER_ERROR)
    r("analyze -c cva6 -p spm -m hit", EXIT_CONFIG_ERROR)
    r("analyze -p spm", EXIT_PARSER_ERROR)


def test_analyze_output(tmp_path):
    out = tmp_path / "bounds.csv"
    r(f"analyze -c cva6 -p spm -o {out}")
    lines = out.read_text().splitlines()
    assert lines[0] == "kind,beta,isolation_ps,S,S_alt,U,delta_ps,H_ps"
    assert len(lines) == 1 + 9 * 2
    r(f"analyze -c cpu -p spm -o {out}", topology=MINIMAL)
    for line in out.read_text().splitlines()[1:]:
        values = line.split(",")
        assert values[2] == values[-1]


def test_simulate(tmp_path):
    scenario = SCENARIOS / "spm_isolation.json"
    r(f"simulate -s {scenario} --count 100")
    r(f"simulate -s {scenario} --count 100 --seed 7 --json")
    trace = tmp_path / "trace.jsonl"
    r(f"simulate -s {scenario} --count 10 -o {trace}")
    assert len(trace.read_text().splitlines()) == 10
    r(f"simulate -s {SCENARIOS / 'llc_saturation.json'} --count 50")
    r(f"simulate -s {SCENARIOS / 'spm_interference.json'} --count 50")


def test_simulate_errors(tmp_path):
    scenario = SCENARIOS / "spm_isolation.json"
    r(f"simulate -s {scenario} --horizon 1", EXIT_HORIZON)
    r("simulate -s missing.json", EXIT_PARSER_ERROR)
    broken = tmp_path / "broken.json"
    broken.write_text('{"scenario": {"observed": "cva6", "controllers": {"cva6": {"mode": "isolation", "target": "dram"}}}}')
    r(f"simulate -s {broken}", EXIT_CONFIG_ERROR)


def test_validate(tmp_path):
    out = tmp_path / "report.csv"
    r(f"validate --suite crossbar --count 20 -o {out}")
    assert out.read_text().startswith("suite,scenario,kind,beta,phi_k,V,seed,bound_ps,measured_ps,pessimism_pct,pass\n")
    r("validate --suite parallelism --count 20 --json")
    r("validate --suite crossbar --count 20 --self-check-halve", EXIT_VIOLATION)
    r("validate --suite everything", EXIT_PARSER_ERROR)


def test_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    r(f"sweep --dimension fifo_depth --count 20 -o {out}")
    assert out.read_text().startswith("dimension,point,kind,metric,value\n")
    r("sweep --dimension fifo_depth --points 2,x", EXIT_PARSER_ERROR)
    r("sweep --dimension clock_ratio --points 10000", EXIT_CONFIG_ERROR, topology=MINIMAL)


def test_help():
    r("--help")
    r("analyze --help")
    r("-h", EXIT_PARSER_ERROR)
    assert main(["socbound", "--version"]) == EXIT_SUCCESS


def test_simulate_horizon(capsys):
    scenario = SCENARIOS / "spm_isolation.json"
    capsys.readouterr()
    r(f"simulate -s {scenario} --horizon 100000", EXIT_HORIZON)
    captured = capsys.readouterr()
    assert "transactions, end at" in captured.out
    assert "horizon exceeded" in captured.err
    r(f"simulate -s {scenario} --horizon 100000 --json", EXIT_HORIZON)
    summary = json.loads(capsys.readouterr().out)
    assert summary["end_ps"] <= 100000
    assert summary["transactions"] < 10000


def test_topology_resolution(tmp_path, monkeypatch):
    monkeypatch.setattr(socbound.cli, "USER_TOPOLOGY", tmp_path / "topology.json")
    assert resolve_topology(None) == socbound.topology.REFERENCE_TOPOLOGY
    assert resolve_topology(str(MINIMAL)) == MINIMAL
    (tmp_path / "topology.json").write_text(MINIMAL.read_text())
    assert resolve_topology(None) == tmp_path / "topology.json"


def test_topology_warnings(tmp_path, caplog):
    topology = tmp_path / "slow_spm.json"
    topology.write_text(SLOW_SPM)
    r("analyze -c cpu -p spm", topology=topology)
    warnings = [x for x in caplog.records if x.name == "socbound" and x.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert "peripheral clock differs" in warnings[0].getMessage()


def test_unexpected_error(monkeypatch, caplog, capsys):
    def broken(*args, **kwargs):
        raise RuntimeError("broken")

    monkeypatch.setattr(socbound.cli.SocBound, "analyze", broken)
    r("-v analyze -c cva6 -p spm", EXIT_CONFIG_ERROR)
    assert "unexpected error: RuntimeError('broken')" in capsys.readouterr().err
    assert any(x.exc_info for x in caplog.records if x.getMessage() == "unexpected error")
