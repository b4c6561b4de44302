"""Compilation driver, random benchmarks, equivalence checking and scaling fits."""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from topt.circuit import GATE_ARITY, Circuit, Gate, load, t_count
from topt.gf2 import BitMatrix
from topt.optimizers import OptimizerChoice, OptimizerKind, re_expand, rm_decode, run_pipeline, todd, tool
from topt.phase import (
    SignatureTensor3,
    WeightedPolynomial,
    monomial_index_sets,
    proper,
    signature_from_wp,
    wp_from_signature,
)
from topt.preprocess import GadgetizedForm, cancel_hadamard_pairs, classify_hadamards, gadgetize, partition_forms
from topt.resynthesis import BlockResult, assemble
from topt.simulator import TooLarge, fidelity, random_state, simulate_branches, surviving_state, unitary_apply

VERIFY_CAP = 12
CSV_COLUMNS = ["name", "n", "h", "Np", "optimizer", "T_before", "T_after", "saving_pct", "seconds", "seed"]


FIXTURES_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class FixtureReference:
    """Published figures for a vendored fixture."""

    T_before: int
    best_prev: int
    todd: int
    n_h: int


FIXTURE_REFERENCES = {
    "mod5_4": FixtureReference(28, 16, 16, 6),
    "nc_toff_4": FixtureReference(21, 15, 13, 2),
    "nc_toff_5": FixtureReference(35, 23, 19, 4),
    "barenco_toff_4": FixtureReference(28, 16, 14, 3),
    "vbe_adder_3": FixtureReference(70, 24, 20, 4),
}


def fixture_paths(directory: str | Path | None = None) -> list[Path]:
    return sorted(Path(directory or FIXTURES_DIR).glob("*.qc"))


class InsufficientData(ValueError):
    """Not enough points to fit a scaling law."""


# compilation


def block_optimizer(choice: OptimizerChoice):
    """Map a block's (f_in, A_in) to an optimized gate synthesis matrix.

    TODD runs from both the block's own matrix and the RE expansion and keeps
    the shorter result, so it never returns more columns than the block had.
    """
    kind = choice.kind

    def run(f: WeightedPolynomial, A_in: BitMatrix) -> BitMatrix:
        if kind is OptimizerKind.RE:
            return proper(re_expand(f))
        if kind is OptimizerKind.TODD:
            own = todd(proper(A_in))
            expanded = todd(proper(re_expand(f)))
            return expanded if expanded.cols < own.cols else own
        S = signature_from_wp(f)
        if kind is OptimizerKind.RM:
            return rm_decode(S, choice.rm_limit)
        return tool(S, feedback=kind is OptimizerKind.TOOL_F, seed=choice.seed, rm_limit=choice.rm_limit)

    return run


@dataclass
class CompileResult:
    circuit: Circuit
    forms: list[GadgetizedForm]
    blocks: list[BlockResult]
    T_before: int
    T_after: int
    h: int
    N_p: int
    seconds: float


def compile_circuit(
    c: Circuit,
    optimizer: str | OptimizerChoice = "todd",
    hadamard: str = "gadget",
    h_cap: int | None = None,
    seed: int = 0,
    rm_limit: int = 6,
    cancel_h: bool = True,
) -> CompileResult:
    """Gadgetize (or partition), optimize each block, and assemble the output circuit."""
    choice = optimizer if isinstance(optimizer, OptimizerChoice) else OptimizerChoice(
        OptimizerKind.parse(optimizer), seed=seed, rm_limit=rm_limit)
    start = time.perf_counter()
    if hadamard == "partition":
        forms = partition_forms(c, cancel_h)
    elif hadamard == "gadget":
        forms = gadgetize(c, h_cap, cancel_h)
    else:
        raise ValueError(f"unknown hadamard mode {hadamard!r}")
    out, blocks = assemble(forms, block_optimizer(choice))
    elapsed = time.perf_counter() - start
    return CompileResult(out, forms, blocks, t_count(c), t_count(out), out.h, len(forms), elapsed)


# random inputs


def random_signature(n: int, seed: int) -> SignatureTensor3:
    """Each independent entry i.i.d. Bernoulli(1/2), deterministic per (n, seed)."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    return SignatureTensor3.from_vector(n, rng.integers(0, 2, len(monomial_index_sets(n))))


def random_clifford_t_circuit(n: int, depth: int, h_internal: int, seed: int) -> Circuit:
    """``depth`` gates drawn uniformly from {S, T, CNOT}, plus exactly ``h_internal`` internal H's.

    Each H goes on a wire between its first and last non-H gate, so it is
    internal by construction.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    kinds = ["S", "T", "CNOT"] if n > 1 else ["S", "T"]
    gates: list[Gate] = []
    for _ in range(depth):
        k = rng.choice(kinds)
        gates.append(Gate(k, tuple(rng.sample(range(n), GATE_ARITY[k]))))
    for _ in range(h_internal):
        spans = {}
        for i, g in enumerate(gates):
            if g.kind == "H":
                continue
            for q in g.qubits:
                lo, _ = spans.get(q, (i, i))
                spans[q] = (lo, i)
        wires = sorted(q for q, (lo, hi) in spans.items() if hi > lo)
        if not wires:
            raise ValueError("circuit too shallow to hold an internal Hadamard")
        q = rng.choice(wires)
        lo, hi = spans[q]
        gates.insert(rng.randint(lo + 1, hi), Gate("H", (q,)))
    return Circuit(n, 0, gates)


def internal_h_count(c: Circuit, cancel_h: bool = False) -> int:
    if cancel_h:
        c = cancel_hadamard_pairs(c)
    return sum(1 for k in classify_hadamards(c) if k == "internal")


# equivalence


@dataclass
class VerifyResult:
    equivalent: bool
    worst_infidelity: float
    branches: int


def verify_equivalence(
    original: Circuit, compiled: Circuit, trials: int = 3, seed: int = 0, tol: float = 1e-10
) -> VerifyResult:
    """Check every measurement branch of ``compiled`` against the unitary ``original``.

    The survivors (unmeasured wires, ascending) must hold ``U|psi>`` up to
    global phase for random ``|psi>``. Branches of zero probability are skipped.
    """
    if compiled.num_qubits > VERIFY_CAP or original.num_qubits > VERIFY_CAP:
        raise TooLarge(f"verification is limited to {VERIFY_CAP} qubits")
    if not original.is_unitary() or original.h:
        raise ValueError("the reference circuit must be unitary without ancillas")
    if compiled.n != original.n:
        raise ValueError(f"data registers differ: {original.n} vs {compiled.n}")
    survivors = compiled.num_qubits - len(compiled.measured_qubits())
    if survivors != original.n:
        return VerifyResult(False, 1.0, 0)
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for _ in range(trials):
        psi = random_state(original.n, rng)
        want = unitary_apply(original, psi)
        for b in simulate_branches(compiled, psi):
            if b.probability < 1e-12:
                continue
            count += 1
            worst = max(worst, 1.0 - fidelity(surviving_state(compiled, b), want))
    return VerifyResult(worst <= tol, worst, count)


# benchmarks


@dataclass
class BenchmarkRecord:
    name: str
    n: int
    h: int
    Np: int
    optimizer: str
    T_before: int
    T_after: int
    saving_pct: float
    seconds: float
    seed: int
    T_ref: int | None = None
    verified: bool | None = None
    error: str | None = None

    def csv_row(self) -> list:
        return [
            self.name, self.n, self.h, self.Np, self.optimizer, self.T_before, self.T_after,
            f"{self.saving_pct:.4f}", f"{self.seconds:.6f}", self.seed,
        ]


def saving(T_ref: int, T_after: int) -> float:
    return 100.0 * (T_ref - T_after) / T_ref if T_ref else 0.0


@dataclass
class BenchmarkSpec:
    """Either ``fixtures`` (file paths) or random mode (``ns``, ``trials``)."""

    fixtures: Sequence[str | Path] = ()
    ns: Sequence[int] = ()
    trials: int = 20
    optimizers: Sequence[str] = ("todd",)
    seed: int = 0
    hadamard: str = "gadget"
    h_cap: int | None = None
    verify: bool = True
    references: dict[str, int] = field(default_factory=dict)  # name -> T_ref


def trial_seed(seed: int, n: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1, dtype=np.uint64)[0])


def _random_record(n: int, trial: int, opt: str, seed: int) -> BenchmarkRecord:
    s = trial_seed(seed, n, trial)
    S = random_signature(n, s)
    T_before = proper(re_expand(wp_from_signature(S))).cols
    t0 = time.perf_counter()
    A = run_pipeline(S, OptimizerChoice(OptimizerKind.parse(opt), seed=s % 2**64))
    dt = time.perf_counter() - t0
    return BenchmarkRecord(f"random-n{n}-t{trial}", n, 0, 1, opt, T_before, A.cols,
                           saving(T_before, A.cols), dt, s, T_before)


def _fixture_record(path: Path, opt: str, spec: BenchmarkSpec) -> BenchmarkRecord:
    name = path.stem
    try:
        c = load(path)
        res = compile_circuit(c, opt, spec.hadamard, spec.h_cap, spec.seed)
        known = FIXTURE_REFERENCES.get(name)
        ref = spec.references.get(name, known.best_prev if known else res.T_before)
        rec = BenchmarkRecord(name, c.n, res.h, res.N_p, opt, res.T_before, res.T_after,
                              saving(ref, res.T_after), res.seconds, spec.seed, ref)
        if spec.verify and res.circuit.num_qubits <= VERIFY_CAP:
            rec.verified = verify_equivalence(c, res.circuit, trials=2, seed=spec.seed).equivalent
        return rec
    except Exception as exc:  # per-record failure is captured, the run continues
        return BenchmarkRecord(name, 0, 0, 0, opt, 0, 0, 0.0, 0.0, spec.seed, error=f"{type(exc).__name__}: {exc}")


def run_benchmark(spec: BenchmarkSpec | None) -> list[BenchmarkRecord]:
    """One record per (circuit, optimizer), sorted by (name, optimizer, seed)."""
    if spec is None:
        return []
    records: list[BenchmarkRecord] = []
    for path in spec.fixtures:
        for opt in spec.optimizers:
            records.append(_fixture_record(Path(path), opt, spec))
    for n in spec.ns:
        for trial in range(spec.trials):
            for opt in spec.optimizers:
                try:
                    records.append(_random_record(n, trial, opt, spec.seed))
                except Exception as exc:
                    records.append(BenchmarkRecord(f"random-n{n}-t{trial}", n, 0, 1, opt, 0, 0, 0.0, 0.0,
                                                   trial_seed(spec.seed, n, trial), error=f"{type(exc).__name__}: {exc}"))
    records.sort(key=lambda r: (r.name, r.optimizer, r.seed))
    return records


def records_to_csv(records: Iterable[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def records_to_json(records: Iterable[BenchmarkRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2)


# scaling


@dataclass
class ScalingFit:
    slope: float
    stderr: float
    intercept: float

    def interval(self, z: float = 1.96) -> tuple[float, float]:
        return self.slope - z * self.stderr, self.slope + z * self.stderr


@dataclass
class ScalingPoint:
    n: int
    mean: float
    sem: float
    trials: int


@dataclass
class ScalingReport:
    points: dict[str, list[ScalingPoint]]
    fits: dict[str, ScalingFit]


def fit_scaling(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares slope of log(mean T) against log(n)."""
    pts = [(float(n), float(t)) for n, t in points]
    if len({n for n, _ in pts}) < 3:
        raise InsufficientData("need at least 3 distinct n values")
    if any(n <= 0 or t <= 0 for n, t in pts):
        raise InsufficientData("log-log fit needs positive n and T")
    x = np.log([n for n, _ in pts])
    y = np.log([t for _, t in pts])
    X = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ np.array([slope, intercept])
    dof = len(x) - 2
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = math.sqrt(float(resid @ resid) / dof / sxx) if dof > 0 else 0.0
    return ScalingFit(float(slope), stderr, float(intercept))


def scaling_report(records: Iterable[BenchmarkRecord], min_trials: int = 10) -> ScalingReport:
    by: dict[str, dict[int, list[int]]] = {}
    for r in records:
        if r.error is None:
            by.setdefault(r.optimizer, {}).setdefault(r.n, []).append(r.T_after)
    points: dict[str, list[ScalingPoint]] = {}
    fits: dict[str, ScalingFit] = {}
    for opt, per_n in by.items():
        pts = []
        for n in sorted(per_n):
            v = np.array(per_n[n], float)
            if len(v) < min_trials:
                raise InsufficientData(f"{opt} at n={n} has {len(v)} trials (< {min_trials})")
            sem = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else 0.0
            pts.append(ScalingPoint(n, float(v.mean()), sem, len(v)))
        points[opt] = pts
        fits[opt] = fit_scaling([(p.n, p.mean) for p in pts])
    return ScalingReport(points, fits)
