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


import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import appdirs
import click
from click.core import Context

from .components import HramDataMode
from .duration import Duration
from .experiments import (
    BETAS,
    DEFAULT_COUNT,
    DEFAULT_SEEDS,
    FULL_COUNT,
    Suite,
    SweepDimension,
    report_to_csv,
    sweep,
    sweep_to_csv,
    validate,
)
from .model import MemoryCase, SocBoundError, Topology, TopologyError, TransactionKind
from .simulator import DEFAULT_HORIZON, HorizonExceeded, TraceStats, build_sim, run, write_trace
from .system import TransactionQuery, isolation_bound, same_type_interference_count_alternate, wcrt, with_phi
from .topology import REFERENCE_TOPOLOGY, load_topology, validate_topology
from .traffic import load_scenario

__version__ = "1.0.0"
__all__ = [
    "main",
    "SocBound",
]

DESCRIPTION = "SocBound computes and validates worst-case response time bounds of SoC bus transactions."
CONFIG_DIR = Path(appdirs.user_config_dir(appname="socbound"))
USER_TOPOLOGY = CONFIG_DIR / "topology.json"

EXIT_SUCCESS = 0
EXIT_VIOLATION = 1
EXIT_CONFIG_ERROR = 2
EXIT_HORIZON = 3

ANALYZE_COLUMNS = ["kind", "beta", "isolation_ps", "S", "S_alt", "U", "delta_ps", "H_ps"]

logger = logging.getLogger("socbound")


def resolve_topology(path: Optional[str]) -> Path:
    "Option or environment variable, then the user config dir, then the packaged reference"
    if path:
        return Path(path)
    if USER_TOPOLOGY.exists():
        return USER_TOPOLOGY
    return REFERENCE_TOPOLOGY


def parse_phi(values: Sequence[str]) -> Dict[str, int]:
    result = {}
    for value in values:
        id, sep, phi = value.partition("=")
        if not sep or not phi.isdigit():
            raise click.BadParameter(f"expected ID=N, got {value!r}", param_hint="--phi")
        result[id] = int(phi)
    return result


def parse_points(value: Optional[str]) -> Optional[List[int]]:
    if not value:
        return None
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected a comma separated list of integers, got {value!r}", param_hint="--points")


@click.group("cli", help=DESCRIPTION)
@click.version_option(__version__)
@click.option(
    "--topology", help="Topology path.", type=click.Path(exists=True, dir_okay=False), envvar="SOCBOUND_TOPOLOGY"
)
@click.option(
    "--hram-mode",
    help="HyperRAM data time interpretation.",
    type=click.Choice([x.value for x in HramDataMode]),
    default=HramDataMode.PHYSICAL.value,
)
@click.option("-v", "--verbose", help="Verbose output.", default=False, is_flag=True)
@click.pass_context
def cli(ctx: Context, topology: Optional[str], hram_mode: str, verbose: bool) -> None:
    logging.basicConfig(format="%(name)s: %(message)s")
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    ctx.obj = SocBound(topology_filename=resolve_topology(topology), mode=HramDataMode(hram_mode), verbose=verbose)


class SocBound(object):
    verbose: bool
    mode: HramDataMode
    topology_filename: Path

    def __init__(
        self,
        topology_filename: Path = REFERENCE_TOPOLOGY,
        mode: HramDataMode = HramDataMode.PHYSICAL,
        verbose: bool = False,
    ):
        self.topology_filename = topology_filename
        self.mode = mode
        self.verbose = verbose

    @property
    def topology(self) -> Topology:
        "Load and validate the topology"
        t = load_topology(self.topology_filename)
        result = validate_topology(t)
        if not result.ok:
            raise TopologyError("\n".join(str(x) for x in result.errors))
        for diagnostic in result.warnings:
            logger.warning("%s", diagnostic)
        if self.verbose:
            click.secho(f"topology {self.topology_filename}", fg="yellow")
        return t

    def analyze(
        self,
        controller: str,
        peripheral: str,
        kinds: Sequence[TransactionKind],
        betas: Sequence[int],
        memory_case: Optional[MemoryCase] = None,
        phi: Optional[Dict[str, int]] = None,
        V: int = 1,
    ) -> List[Tuple[TransactionQuery, Dict]]:
        "One bound row per (kind, beta)"
        t = self.topology
        if phi:
            t = with_phi(t, phi)
        rows = []
        for kind in kinds:
            for beta in betas:
                q = TransactionQuery(
                    controller=controller, peripheral=peripheral, kind=kind, beta=beta, memory_case=memory_case, V=V
                )
                bound = wcrt(t, q, self.mode)
                data = bound.to_dict()
                data["S_alt"] = same_type_interference_count_alternate(t, q)
                data["isolation_breakdown"] = isolation_bound(t, q, self.mode).to_dict()
                rows.append((q, data))
        return rows

    def simulate(
        self, scenario_filename: Path, seed: Optional[int] = None, count: Optional[int] = None, horizon: Duration = DEFAULT_HORIZON
    ) -> TraceStats:
        t = self.topology
        s = load_scenario(scenario_filename)
        if seed is None:
            seed = s.seed if s.seed is not None else 0
        return run(build_sim(t, s, seed), max_transactions=count, horizon=horizon)


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        with Path(out).open("w") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


@cli.command("analyze")
@click.option("-c", "--controller", help="Observed controller", required=True)
@click.option("-p", "--peripheral", help="Target peripheral", required=True)
@click.option("-k", "--kind", help="Transaction kind", type=click.Choice(["read", "write", "both"]), default="both")
@click.option("-b", "--beta", "betas", help="Burst length (repeatable)", type=click.INT, multiple=True)
@click.option("-m", "--memory-case", help="Main memory case", type=click.Choice([x.value for x in MemoryCase]))
@click.option("--phi", help="Outstanding transactions override ID=N (repeatable)", multiple=True)
@click.option("--V", "V", help="Same-type transactions queued by the observed controller", type=click.IntRange(min=1), default=1)
@click.option("--json", "json_format", help="JSON output with the full breakdown", default=False, is_flag=True)
@click.option("-o", "--out", help="Output file", type=click.Path(dir_okay=False))
@click.pass_context
def cmd_analyze(
    ctx: Context,
    controller: str,
    peripheral: str,
    kind: str,
    betas: Tuple[int],
    memory_case: Optional[str],
    phi: Tuple[str],
    V: int,
    json_format: bool,
    out: Optional[str],
) -> None:
    """
    Print the bounds of a controller/peripheral pair.

    Example: socbound analyze -c cva6 -p spm -b 1 -b 16
    """
    app = ctx.obj
    kinds = list(TransactionKind) if kind == "both" else [TransactionKind(kind)]
    rows = app.analyze(
        controller,
        peripheral,
        kinds,
        betas or BETAS,
        MemoryCase(memory_case) if memory_case else None,
        parse_phi(phi),
        V,
    )
    for _, data in rows:
        for warning in data["warnings"]:
            click.secho(warning, fg="yellow", err=True)
    if json_format:
        text = json.dumps([dict(query=q.to_dict(), **data) for q, data in rows], indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(ANALYZE_COLUMNS)
        for q, data in rows:
            writer.writerow(
                [q.kind.value, q.beta, data["isolation_ps"], data["S"], data["S_alt"], data["U"], data["delta_ps"], data["total_ps"]]
            )
        text = buffer.getvalue()
    write_output(text, out)


@cli.command("simulate")
@click.option("-s", "--scenario", help="Scenario path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--seed", help="Random seed", type=click.INT)
@click.option("--count", help="Transactions per bounded workload", type=click.IntRange(min=0))
@click.option("--full", help=f"Use {FULL_COUNT} transactions per bounded workload", default=False, is_flag=True)
@click.option("--horizon", help="Simulated time limit (ps)", type=click.IntRange(min=1), default=DEFAULT_HORIZON.to_ps())
@click.option("--json", "json_format", help="JSON output", default=False, is_flag=True)
@click.option("-o", "--out", help="Trace output file (one JSON record per line)", type=click.Path(dir_okay=False))
@click.pass_context
def cmd_simulate(
    ctx: Context,
    scenario: str,
    seed: Optional[int],
    count: Optional[int],
    full: bool,
    horizon: int,
    json_format: bool,
    out: Optional[str],
) -> None:
    """
    Simulate a scenario and print the measured maxima.
    """
    app = ctx.obj
    try:
        stats = app.simulate(Path(scenario), seed, FULL_COUNT if full else count, Duration.from_ps(horizon))
    except HorizonExceeded as ex:
        click.secho(str(ex), fg="red", err=True)
        print_stats(ex.stats, json_format, out, app.verbose)
        ctx.exit(EXIT_HORIZON)
    print_stats(stats, json_format, out, app.verbose)


def print_stats(stats: TraceStats, json_format: bool, out: Optional[str], verbose: bool) -> None:
    "Measured maxima of a run, complete or not"
    if out:
        write_trace(stats, Path(out))
    summary = {
        "observed": stats.observed,
        "transactions": len(stats.records),
        "end_ps": stats.end_ps,
        "trace_hash": stats.trace_hash,
        "incomplete": stats.incomplete,
        "max_service_ps": [
            {"kind": kind.value, "beta": beta, "service_ps": ps} for (kind, beta), ps in sorted(stats.max_service_ps.items(), key=str)
        ],
        "max_outstanding": dict((p, dict((k.value, n) for k, n in x.items())) for p, x in sorted(stats.outstanding.items())),
        "memory_cases": dict((p, [x.value for x in cases]) for p, cases in sorted(stats.memory_cases.items())),
    }
    if json_format:
        click.echo(json.dumps(summary, indent=2))
        return
    click.secho(f"{summary['transactions']} transactions, end at {stats.end_ps} ps", fg="green")
    if stats.incomplete:
        click.secho(f"{stats.incomplete} transactions incomplete", fg="yellow")
    for row in summary["max_service_ps"]:
        click.echo(f"{stats.observed} {row['kind']:5} beta {row['beta']:3}  max service {row['service_ps']} ps")
    for peripheral, values in summary["max_outstanding"].items():
        outstanding = " ".join(f"{k} {n}" for k, n in values.items())
        click.echo(f"{peripheral} max outstanding {outstanding}")
    if verbose:
        click.secho(f"trace hash {stats.trace_hash}", fg="yellow")


@cli.command("validate")
@click.option("--suite", help="Built-in suite", type=click.Choice([x.value for x in Suite]), required=True)
@click.option("--seeds", help="Seeds per cell", type=click.IntRange(min=1))
@click.option("--count", help="Transactions per cell", type=click.IntRange(min=1), default=DEFAULT_COUNT)
@click.option("--full", help=f"Use {FULL_COUNT} transactions per cell", default=False, is_flag=True)
@click.option("-j", "--jobs", help="Parallel cells", type=click.IntRange(min=1), default=1)
@click.option("--self-check-halve", help="Halve every bound (the report must fail)", default=False, is_flag=True)
@click.option("--json", "json_format", help="JSON summary", default=False, is_flag=True)
@click.option("-o", "--out", help="CSV output file", type=click.Path(dir_okay=False))
@click.pass_context
def cmd_validate(
    ctx: Context,
    suite: str,
    seeds: Optional[int],
    count: int,
    full: bool,
    jobs: int,
    self_check_halve: bool,
    json_format: bool,
    out: Optional[str],
) -> None:
    """
    Run a built-in suite and compare measurements with the bounds.
    """
    app = ctx.obj
    report = validate(
        app.topology,
        Suite(suite),
        seeds or DEFAULT_SEEDS[Suite(suite)],
        FULL_COUNT if full else count,
        jobs,
        self_check_halve,
        app.mode,
    )
    summary = report.summary
    if json_format:
        click.echo(
            json.dumps(
                {
                    "rows": summary.rows,
                    "violations": summary.violations,
                    "min_pessimism_pct": float(summary.min_pessimism) if summary.min_pessimism is not None else None,
                    "max_pessimism_pct": float(summary.max_pessimism) if summary.max_pessimism is not None else None,
                },
                indent=2,
            )
        )
        if out:
            write_output(report_to_csv(report), out)
    else:
        write_output(report_to_csv(report), out)
        click.secho(str(summary), fg="green" if report.ok else "red", err=True)
    for row in report.violations:
        click.secho(f"violation: {row.scenario} {row.kind} beta {row.beta} seed {row.seed}", fg="red", err=True)
    if not report.ok:
        ctx.exit(EXIT_VIOLATION)


@cli.command("sweep")
@click.option("--dimension", help="Sweep dimension", type=click.Choice([x.value for x in SweepDimension]), required=True)
@click.option("--points", help="Comma separated sweep points")
@click.option("--seeds", help="Seeds per point", type=click.IntRange(min=1), default=1)
@click.option("--count", help="Transactions per cell", type=click.IntRange(min=1), default=DEFAULT_COUNT)
@click.option("--full", help=f"Use {FULL_COUNT} transactions per cell", default=False, is_flag=True)
@click.option("-j", "--jobs", help="Parallel cells", type=click.IntRange(min=1), default=1)
@click.option("-o", "--out", help="CSV output file", type=click.Path(dir_okay=False))
@click.pass_context
def cmd_sweep(
    ctx: Context,
    dimension: str,
    points: Optional[str],
    seeds: int,
    count: int,
    full: bool,
    jobs: int,
    out: Optional[str],
) -> None:
    """
    Bound and measured curves along one dimension.

    Example: socbound sweep --dimension clock_ratio --points 10000,30000,50000
    """
    app = ctx.obj
    rows = sweep(
        app.topology,
        SweepDimension(dimension),
        parse_points(points),
        seeds,
        FULL_COUNT if full else count,
        jobs,
        app.mode,
    )
    write_output(sweep_to_csv(rows), out)


def main(argv: Optional[List[str]] = None) -> int:
    if argv:
        prog_name = Path(argv[0]).name
        args = argv[1:]
    else:
        args = None
        prog_name = "socbound"
    try:
        cli(prog_name=prog_name, args=args)
        return EXIT_SUCCESS
    except SystemExit as err:
        return err.code  # type: ignore
    except HorizonExceeded as ex:
        click.secho(f"{prog_name}: {ex}", fg="red", err=True)
        return EXIT_HORIZON
    except (SocBoundError, OSError) as ex:
        click.secho(f"{prog_name}: {ex}", fg="red", err=True)
        return EXIT_CONFIG_ERROR
    except Exception as ex:
        logger.debug("unexpected error", exc_info=True)
        click.secho(f"{prog_name}: unexpected error: {ex!r}", fg="red", err=True)
        return EXIT_CONFIG_ERROR
