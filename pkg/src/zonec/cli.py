"""Command-line surface: compile, simulate, and sweep.

stdout carries data only; diagnostics go to stderr. Exit codes: 0 ok,
1 usage error, 2 input/parse error, 3 capacity or routing error.
"""

from __future__ import annotations

import sys

import click

from .arch import ConfigError, LayoutError, MachineConfig, Policy, build_layout, load_config
from .cost import (
    breakdown,
    csv_header,
    csv_row,
    fidelity,
    format_record,
    physical_gate_count,
    report_record,
)
from .frontend import ParseError, parse_benchmark, parse_pauli_file, parse_qasm
from .ir import CircuitError, count_gates
from .rewrite import PipelineOptions, mantra_pipeline
from .scheduler import ScheduleError, count_ld_st, schedule

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_source(bench, qasm, pauli, seed):
    given = [x for x in (bench, qasm, pauli) if x]
    if len(given) != 1:
        _fail(EXIT_USAGE, "exactly one of --bench, --qasm, --pauli is required")
    try:
        if bench:
            return parse_benchmark(bench, seed=seed).materialize()
        if qasm:
            with open(qasm) as fh:
                return parse_qasm(fh.read())
        with open(pauli) as fh:
            return parse_pauli_file(fh.read())
    except FileNotFoundError as e:
        _fail(EXIT_INPUT, str(e))
    except (ParseError, CircuitError, ValueError) as e:
        _fail(EXIT_INPUT, str(e))


def _load_machine(config_path, policy):
    try:
        cfg = load_config(config_path) if config_path else MachineConfig()
        if policy:
            from dataclasses import replace

            cfg = replace(cfg, policy=Policy(policy))
        return cfg
    except (ConfigError, OSError, ValueError) as e:
        _fail(EXIT_INPUT, str(e))


def _compile(source, mode, protocol, x_basis):
    try:
        opts = PipelineOptions(mode=mode, protocol=protocol, x_basis=x_basis)
        return mantra_pipeline(source, opts)
    except (CircuitError, ValueError) as e:
        _fail(EXIT_INPUT, str(e))


def _schedule(program, cfg):
    try:
        layout = build_layout(cfg, program.num_qubits)
        return schedule(program, layout, cfg)
    except (LayoutError, ScheduleError) as e:
        _fail(EXIT_CAPACITY, str(e))


_COMMON = [
    click.option("--bench", help="benchmark spec, e.g. ghz:80:fountain, "
                 "ucc:15:10, qaoa-sk:8:2, qaoa-pl:12:2, po:10:1"),
    click.option("--qasm", type=click.Path(), help="OpenQASM 2.0 input file"),
    click.option("--pauli", type=click.Path(), help="Pauli term input file"),
    click.option("--mode", type=click.Choice(["mantra", "standard"]),
                 default="mantra", show_default=True),
    click.option("--policy", type=click.Choice(["type1", "type2", "type3"]),
                 default=None, help="operation policy (default: config file or type1)"),
    click.option("--config", "config_path", type=click.Path(),
                 envvar="ZONEC_CONFIG", help="machine config file"),
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--x-basis", is_flag=True, help="absorb leading/trailing "
                 "basis changes into preparation and readout"),
    click.option("--protocol", type=click.Choice(["adiabatic", "cphase"]),
                 default="adiabatic", show_default=True),
]


def _common(f):
    for opt in reversed(_COMMON):
        f = opt(f)
    return f


@click.group()
def cli():
    """Compiler and execution-cost simulator for zoned atom arrays."""


@cli.command("compile")
@_common
@click.option("--format", "fmt", type=click.Choice(["human", "steps"]),
              default="human", show_default=True)
def cmd_compile(bench, qasm, pauli, mode, policy, config_path, seed, x_basis,
                protocol, fmt):
    """Compile to a zone-step program and report gate/movement counts."""
    source = _load_source(bench, qasm, pauli, seed)
    cfg = _load_machine(config_path, policy)
    program = _compile(source, mode, protocol, x_basis)
    timeline = _schedule(program, cfg)
    loads, stores = count_ld_st(timeline)
    flat = program.flatten()
    counts = count_gates(flat)
    if fmt == "steps":
        for i, step in enumerate(program.steps):
            click.echo(f"step {i} {step.zone.value} {len(step.gates)}")
    else:
        for i, step in enumerate(program.steps):
            names = " ".join(
                f"{g.kind.value}({','.join(map(str, g.qubits))})" for g in step.gates
            )
            click.echo(f"step {i} [{step.zone.value}] {names}")
    click.echo(f"n_1q = {counts.n_1q}")
    click.echo(f"n_rz = {counts.n_rz}")
    click.echo(f"n_2q = {counts.n_2q}")
    click.echo(f"n_physical = {physical_gate_count(flat, cfg)}")
    click.echo(f"ld_st = {loads + stores}")


@cli.command("simulate")
@_common
@click.option("--format", "fmt", type=click.Choice(["human", "record", "csv"]),
              default="record", show_default=True)
@click.option("--events", is_flag=True, help="also dump the event timeline")
def cmd_simulate(bench, qasm, pauli, mode, policy, config_path, seed, x_basis,
                 protocol, fmt, events):
    """Schedule on the machine model and report time breakdown + fidelity."""
    source = _load_source(bench, qasm, pauli, seed)
    cfg = _load_machine(config_path, policy)
    program = _compile(source, mode, protocol, x_basis)
    timeline = _schedule(program, cfg)
    loads, stores = count_ld_st(timeline)
    bd = breakdown(timeline)
    fr = fidelity(timeline, program.flatten(), cfg)
    rec = report_record(bd, fr, loads, stores)
    if events:
        click.echo(timeline.to_lines(), nl=False)
    if fmt == "csv":
        click.echo(csv_header())
        click.echo(csv_row(rec))
    elif fmt == "human":
        for k, v in rec.items():
            label = k.replace("_us", " (us)").replace("_", " ")
            click.echo(f"{label:24s} {v:.6f}" if isinstance(v, float)
                       else f"{label:24s} {v}")
    else:
        click.echo(format_record(rec), nl=False)


@cli.command("sweep")
@click.option("--bench", "bench_template", required=True,
              help="benchmark template with {axis} placeholder, e.g. ghz:{n}:path")
@click.option("--axis", required=True, help="axis spec name=v1,v2,...")
@click.option("--modes", default="mantra", show_default=True,
              help="comma-separated compile modes, one row per mode per point")
@click.option("--policy", type=click.Choice(["type1", "type2", "type3"]),
              default=None)
@click.option("--config", "config_path", type=click.Path(), envvar="ZONEC_CONFIG")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--x-basis", is_flag=True)
@click.option("--protocol", type=click.Choice(["adiabatic", "cphase"]),
              default="adiabatic", show_default=True)
def cmd_sweep(bench_template, axis, modes, policy, config_path, seed, x_basis,
              protocol):
    """Run a benchmark template across one axis; emit one CSV row per point."""
    if "=" not in axis:
        _fail(EXIT_USAGE, "axis must look like name=v1,v2,...")
    name, _, values = axis.partition("=")
    name = name.strip()
    points = [v.strip() for v in values.split(",") if v.strip()]
    mode_list = [m.strip() for m in modes.split(",") if m.strip()]
    for m in mode_list:
        if m not in ("mantra", "standard"):
            _fail(EXIT_USAGE, f"unknown mode {m!r}")
    cfg = _load_machine(config_path, policy)
    click.echo(csv_header(extra=(name, "mode")))
    for point in points:
        spec = bench_template.replace("{" + name + "}", point)
        for m in mode_list:
            try:
                source = parse_benchmark(spec, seed=seed).materialize()
                opts = PipelineOptions(mode=m, protocol=protocol, x_basis=x_basis)
                program = mantra_pipeline(source, opts)
                layout = build_layout(cfg, program.num_qubits)
                timeline = schedule(program, layout, cfg)
                loads, stores = count_ld_st(timeline)
                rec = report_record(
                    breakdown(timeline),
                    fidelity(timeline, program.flatten(), cfg),
                    loads,
                    stores,
                )
                click.echo(csv_row(rec, extra=(point, m)))
            except (ParseError, CircuitError, ConfigError, LayoutError,
                    ScheduleError, ValueError) as e:
                click.echo(f"# point {name}={point} mode={m} failed: {e}", err=True)
                click.echo(",".join([point, m] + ["failed"] * 13))


def main():
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as e:
        click.echo(f"error: {e.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
