"""``topt`` command line: optimize, benchmark and verify circuits.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import asdict
from pathlib import Path

import click

from topt.circuit import ParseError, emit, load
from topt.harness import (
    FIXTURE_REFERENCES,
    VERIFY_CAP,
    BenchmarkRecord,
    BenchmarkSpec,
    InsufficientData,
    compile_circuit,
    fixture_paths,
    records_to_csv,
    records_to_json,
    run_benchmark,
    saving,
    scaling_report,
    verify_equivalence,
)
from topt.optimizers import OptimizerKind
from topt.phase import UnsupportedGate
from topt.simulator import TooLarge

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
OPTIMIZER_NAMES = [k.value for k in OptimizerKind]


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _load(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}")
    except (ParseError, UnsupportedGate, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}")


def _name_list(text: str) -> list[str]:
    names = [t for t in text.replace(",", " ").split()]
    for name in names:
        if name not in OPTIMIZER_NAMES:
            raise InputError(f"unknown optimizer {name!r}; choose from {', '.join(OPTIMIZER_NAMES)}")
    return names


def _write(path: str | None, text: str):
    if path is None:
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """T-count optimizer for Clifford+T circuits."""


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--optimizer", type=click.Choice(OPTIMIZER_NAMES), default="todd", show_default=True)
@click.option("--hadamard", type=click.Choice(["gadget", "partition"]), default="gadget", show_default=True)
@click.option("--h-cap", type=click.IntRange(min=0), default=None, help="Max Hadamard ancillas per block; 0 partitions.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--verify", is_flag=True, help=f"Simulate both circuits (up to {VERIFY_CAP} qubits).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the optimized circuit here.")
@click.option("--report", type=click.Choice(["json", "csv"]), default=None)
@click.option("--no-h-cancel", is_flag=True, help="Keep adjacent Hadamard pairs.")
def optimize(file, optimizer, hadamard, h_cap, seed, verify, out, report, no_h_cancel):
    """Optimize the T count of FILE."""
    c = _load(file)
    try:
        res = compile_circuit(c, optimizer, hadamard, h_cap, seed, cancel_h=not no_h_cancel)
    except UnsupportedGate as exc:
        raise InputError(str(exc))
    name = Path(file).stem
    ref = FIXTURE_REFERENCES[name].best_prev if name in FIXTURE_REFERENCES else res.T_before
    rec = BenchmarkRecord(name, c.n, res.h, res.N_p, optimizer, res.T_before, res.T_after,
                          saving(ref, res.T_after), res.seconds, seed, ref)
    if verify:
        if res.circuit.num_qubits > VERIFY_CAP:
            click.echo(f"warning: {res.circuit.num_qubits} qubits exceeds the verification cap of {VERIFY_CAP}; "
                       "skipping", err=True)
        else:
            rec.verified = verify_equivalence(c, res.circuit, seed=seed).equivalent
    if out is not None:
        Path(out).write_text(emit(res.circuit))
    if report == "json":
        click.echo(json.dumps(asdict(rec), indent=2))
    elif report == "csv":
        click.echo(records_to_csv([rec]), nl=False)
    elif out is None:
        click.echo(emit(res.circuit), nl=False)
    click.echo(f"T count {res.T_before} -> {res.T_after} (h={res.h}, Np={res.N_p})", err=True)
    if rec.verified is False:
        click.echo("verification failed", err=True)
        sys.exit(EXIT_VERIFY)


@main.group()
def bench():
    """Benchmark optimizers on random tensors or fixture circuits."""


@bench.command("random")
@click.option("--n", "ns", default="6,8,10,12,14", show_default=True, help="Comma-separated qubit counts.")
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--optimizers", default="todd", show_default=True, help="Comma-separated optimizer names.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
def bench_random(ns, trials, optimizers, seed, csv_path, json_path):
    """Random signature tensors; prints a log-log scaling fit per optimizer."""
    spec = BenchmarkSpec(ns=_int_list(ns), trials=trials, optimizers=_name_list(optimizers), seed=seed)
    if any(n < 1 for n in spec.ns):
        raise InputError("qubit counts must be positive")
    records = run_benchmark(spec)
    _write(csv_path, records_to_csv(records))
    if json_path:
        Path(json_path).write_text(records_to_json(records))
    try:
        report = scaling_report(records, min_trials=min(10, trials))
    except InsufficientData as exc:
        click.echo(f"no scaling fit: {exc}", err=True)
        return
    for opt, fit in report.fits.items():
        lo, hi = fit.interval()
        means = " ".join(f"{p.n}:{p.mean:.2f}" for p in report.points[opt])
        click.echo(f"{opt}: slope {fit.slope:.3f} +/- {fit.stderr:.3f} (95% [{lo:.3f}, {hi:.3f}]) means {means}",
                   err=True)


@bench.command("fixtures")
@click.option("--dir", "directory", type=click.Path(file_okay=False), default=None,
              help="Directory of .qc/.tc files (default: bundled fixtures).")
@click.option("--optimizer", "optimizers", default="todd", show_default=True, help="Comma-separated optimizer names.")
@click.option("--hadamard", type=click.Choice(["gadget", "partition"]), default="gadget", show_default=True)
@click.option("--h-cap", type=click.IntRange(min=0), default=None)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--verify/--no-verify", default=True, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
def bench_fixtures(directory, optimizers, hadamard, h_cap, seed, verify, csv_path):
    """Optimize every circuit in a directory."""
    if directory is not None and not Path(directory).is_dir():
        raise InputError(f"{directory} is not a directory")
    paths = fixture_paths(directory) + (sorted(Path(directory).glob("*.tc")) if directory else [])
    if not paths:
        raise InputError("no circuits found")
    spec = BenchmarkSpec(fixtures=paths, optimizers=_name_list(optimizers), seed=seed,
                         hadamard=hadamard, h_cap=h_cap, verify=verify)
    records = run_benchmark(spec)
    _write(csv_path, records_to_csv(records))
    failed = False
    for r in records:
        if r.error:
            click.echo(f"{r.name}: error {r.error}", err=True)
        elif r.verified is False:
            click.echo(f"{r.name}: verification failed", err=True)
            failed = True
    if failed:
        sys.exit(EXIT_VERIFY)


@main.command("verify")
@click.argument("original", type=click.Path(dir_okay=False))
@click.argument("compiled", type=click.Path(dir_okay=False))
@click.option("--trials", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
def verify_cmd(original, compiled, trials, seed):
    """Check that COMPILED implements ORIGINAL on every measurement branch."""
    a = _load(original)
    b = _load(compiled)
    try:
        res = verify_equivalence(a, b, trials=trials, seed=seed)
    except (TooLarge, ValueError) as exc:
        raise InputError(str(exc))
    click.echo(json.dumps({"equivalent": res.equivalent, "worst_infidelity": res.worst_infidelity,
                           "branches": res.branches}))
    if not res.equivalent:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
