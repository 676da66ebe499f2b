"""Experiment runners: benchmark curves, CD-term comparison, concentration.

Every runner emits a flat stream of RunRecords (one row per instance,
combination, and optimizer iteration) plus an aggregate summary with mean
relative error and standard error across instances.  All randomness is
derived from a single experiment seed, and records are sorted before any
file is written, so reruns reproduce output files byte for byte.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import optim
from .circuits import (
    AnsatzConfig,
    CD_CLASSES,
    DCQAOA,
    QAOA,
    cached_ground_energy,
    config_for,
    evaluate_cost,
    gradient,
)
from .metalearn import (
    GRU,
    LSTM,
    TrainConfig,
    TrainResult,
    propose_init,
    train,
)
from .problems import (
    MAXCUT_3REGULAR,
    MAXCUT_COMPLETE_WEIGHTED,
    SK,
    ProblemInstance,
    derive_seed,
    generate,
    relative_error,
)

FINAL_OPT_LR = 0.1  # Adagrad learning rate for the circuit-parameter refinement

RANDOM_INIT = "random"
TRANSFERRED_INIT = "transferred"

# Per-problem trainer settings and training-set sizes.
_TRAIN_DEFAULTS = {
    MAXCUT_3REGULAR: (optim.ADAM, 0.1, 100),
    MAXCUT_COMPLETE_WEIGHTED: (optim.ADAGRAD, 0.1, 300),
    SK: (optim.ADAM, 0.01, 200),
}

# Optimizer iteration budgets used in the benchmark studies.
DEFAULT_ITERATIONS = {
    MAXCUT_3REGULAR: 100,
    MAXCUT_COMPLETE_WEIGHTED: 200,
    SK: 100,
}


def default_train_config(
    problem_kind: str, seed: int, train_set_size: int | None = None
) -> TrainConfig:
    kind, lr, size = _TRAIN_DEFAULTS[problem_kind]
    return TrainConfig(
        optimizer_kind=kind,
        learning_rate=lr,
        train_set_size=train_set_size if train_set_size is not None else size,
        seed=seed,
    )


@dataclass(frozen=True)
class RunRecord:
    experiment: str
    problem: str
    algorithm: str
    init: str
    instance_seed: int
    iteration: int
    cost: float
    rel_error: float


def optimize_circuit(
    instance: ProblemInstance,
    config: AnsatzConfig,
    theta0: np.ndarray,
    iterations: int,
    learning_rate: float = FINAL_OPT_LR,
) -> tuple[list[tuple[int, float, float]], np.ndarray]:
    """Adagrad refinement; returns per-iteration (index, cost, rel_error).

    Iteration 0 records the initial parameters; each subsequent index records
    the cost after one optimizer step, for `iterations` rows in total.
    """
    e0 = cached_ground_energy(instance)
    state = optim.make_optimizer(optim.ADAGRAD, learning_rate, config.n_params)
    theta = np.asarray(theta0, dtype=np.float64).copy()
    rows = []
    cost = evaluate_cost(instance, config, theta)
    rows.append((0, cost, relative_error(cost, e0)))
    for it in range(1, iterations):
        grad = gradient(instance, config, theta)
        state, theta = optim.step(state, theta, grad)
        cost = evaluate_cost(instance, config, theta)
        rows.append((it, cost, relative_error(cost, e0)))
    return rows, theta


def _random_init(dim: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.uniform(-np.pi, np.pi, dim)


def _initial_params(
    init: str,
    instance: ProblemInstance,
    config: AnsatzConfig,
    seed: int,
    trained: dict[tuple[str, str], TrainResult] | None,
) -> np.ndarray:
    if init == RANDOM_INIT:
        return _random_init(
            config.n_params,
            derive_seed("randinit", seed, instance.kind, instance.seed, config.algorithm),
        )
    if init == TRANSFERRED_INIT:
        raise ValueError("transferred init is produced by run_concentration")
    if trained is None or (config.algorithm, init) not in trained:
        raise KeyError(f"no trained {init} network for {config.algorithm}")
    result = trained[(config.algorithm, init)]
    return propose_init(
        result.weights, instance, config, derive_seed("propose", seed)
    )


def train_networks(
    problem_kind: str,
    n: int,
    p: int,
    seed: int,
    algorithms: tuple[str, ...] = (QAOA, DCQAOA),
    cells: tuple[str, ...] = (LSTM, GRU),
    cd_class: str = "ZY",
    train_set_size: int | None = None,
) -> dict[tuple[str, str], TrainResult]:
    """One initializer network per (algorithm, cell) pair."""
    out = {}
    for algorithm in algorithms:
        for cell in cells:
            cfg = default_train_config(problem_kind, seed, train_set_size)
            out[(algorithm, cell)] = train(
                cell, problem_kind, n, p, algorithm, cfg, cd_class=cd_class
            )
    return out


def run_benchmark(
    problem_kind: str,
    n: int = 10,
    p: int = 2,
    iterations: int | None = None,
    instances: int = 10,
    inits: tuple[str, ...] = (RANDOM_INIT, LSTM, GRU),
    seed: int = 0,
    trained: dict[tuple[str, str], TrainResult] | None = None,
    algorithms: tuple[str, ...] = (QAOA, DCQAOA),
    cd_class: str = "ZY",
    experiment: str | None = None,
) -> list[RunRecord]:
    """Relative-error curves over held-out instances for each (algorithm, init)."""
    iterations = iterations or DEFAULT_ITERATIONS[problem_kind]
    experiment = experiment or f"bench/{problem_kind}"
    records = []
    for i in range(instances):
        inst = generate(problem_kind, n, derive_seed("eval", seed, problem_kind, i))
        for algorithm in algorithms:
            config = config_for(inst, algorithm, p, cd_class)
            for init in inits:
                theta0 = _initial_params(init, inst, config, seed, trained)
                rows, _ = optimize_circuit(inst, config, theta0, iterations)
                for it, cost, err in rows:
                    records.append(
                        RunRecord(
                            experiment, problem_kind, algorithm, init,
                            inst.seed, it, cost, err,
                        )
                    )
    return sort_records(records)


def run_cd_compare(
    n: int = 8,
    p: int = 1,
    train_size: int = 100,
    eval_instances: int = 5,
    iterations: int = 100,
    seed: int = 0,
    problem_kinds: tuple[str, ...] = (MAXCUT_3REGULAR, MAXCUT_COMPLETE_WEIGHTED, SK),
    cell: str = LSTM,
) -> list[RunRecord]:
    """Train and evaluate one DC-QAOA network per CD pool class and problem."""
    records = []
    for kind in problem_kinds:
        for cls in CD_CLASSES:
            cfg = default_train_config(kind, seed, train_size)
            result = train(cell, kind, n, p, DCQAOA, cfg, cd_class=cls)
            trained = {(DCQAOA, cell): result}
            records.extend(
                run_benchmark(
                    kind, n=n, p=p, iterations=iterations,
                    instances=eval_instances, inits=(cell,), seed=seed,
                    trained=trained, algorithms=(DCQAOA,), cd_class=cls,
                    experiment=f"cd-compare/{cls}",
                )
            )
    return sort_records(records)


def run_concentration(
    node_list: tuple[int, ...] = (10, 14, 16, 18),
    p: int = 2,
    instances: int = 10,
    iterations: int = 100,
    seed: int = 0,
    trained: dict[tuple[str, str], TrainResult] | None = None,
    cd_class: str = "ZY",
    algorithms: tuple[str, ...] = (QAOA, DCQAOA),
) -> list[RunRecord]:
    """Transfer 10-node optimized parameters to larger 3-regular instances.

    Source parameters per algorithm: LSTM-initialized 10-node runs are
    optimized to the iteration budget and their final parameter vectors are
    averaged componentwise into one transferred vector.
    """
    if trained is None:
        trained = train_networks(
            MAXCUT_3REGULAR, 10, p, seed, algorithms=algorithms,
            cells=(LSTM,), cd_class=cd_class,
        )
    transferred: dict[str, np.ndarray] = {}
    for algorithm in algorithms:
        finals = []
        for i in range(instances):
            inst = generate(MAXCUT_3REGULAR, 10, derive_seed("conc-src", seed, i))
            config = config_for(inst, algorithm, p, cd_class)
            theta0 = _initial_params(LSTM, inst, config, seed, trained)
            _, theta = optimize_circuit(inst, config, theta0, iterations)
            finals.append(theta)
        transferred[algorithm] = np.mean(finals, axis=0)

    records = []
    for n in node_list:
        for i in range(instances):
            inst = generate(MAXCUT_3REGULAR, n, derive_seed("conc-eval", seed, n, i))
            for algorithm in algorithms:
                config = config_for(inst, algorithm, p, cd_class)
                for init in (RANDOM_INIT, TRANSFERRED_INIT):
                    if init == TRANSFERRED_INIT:
                        theta0 = transferred[algorithm]
                    else:
                        theta0 = _initial_params(init, inst, config, seed, None)
                    rows, _ = optimize_circuit(inst, config, theta0, iterations)
                    for it, cost, err in rows:
                        records.append(
                            RunRecord(
                                f"concentration/n{n}", MAXCUT_3REGULAR,
                                algorithm, init, inst.seed, it, cost, err,
                            )
                        )
    return sort_records(records)


# --- aggregation and output ---------------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    algorithm: str
    init: str
    iteration: int
    mean_rel_error: float
    stderr: float


def sort_records(records: list[RunRecord]) -> list[RunRecord]:
    return sorted(
        records,
        key=lambda r: (
            r.experiment, r.problem, r.algorithm, r.init,
            r.instance_seed, r.iteration,
        ),
    )


def aggregate(records: list[RunRecord]) -> list[SummaryRow]:
    """Mean and standard error of the relative error across instances."""
    if not records:
        raise ValueError("no records to aggregate")
    groups: dict[tuple, list[float]] = {}
    for r in records:
        groups.setdefault(
            (r.experiment, r.algorithm, r.init, r.iteration), []
        ).append(r.rel_error)
    rows = []
    for key in sorted(groups):
        vals = np.asarray(groups[key])
        stderr = (
            float(np.std(vals, ddof=1) / np.sqrt(vals.size))
            if vals.size > 1
            else 0.0
        )
        rows.append(SummaryRow(*key, float(np.mean(vals)), stderr))
    return rows


def final_means(records: list[RunRecord]) -> dict[tuple, SummaryRow]:
    """Last-iteration summary per (experiment, algorithm, init)."""
    rows = aggregate(records)
    out: dict[tuple, SummaryRow] = {}
    for row in rows:
        key = (row.experiment, row.algorithm, row.init)
        if key not in out or row.iteration > out[key].iteration:
            out[key] = row
    return out


RECORDS_HEADER = "experiment,problem,algorithm,init,instance_seed,iteration,cost,rel_error"
SUMMARY_HEADER = "experiment,algorithm,init,iteration,mean_rel_error,stderr"


def write_records_csv(records: list[RunRecord], path: Path) -> None:
    lines = [RECORDS_HEADER]
    for r in sort_records(records):
        lines.append(
            f"{r.experiment},{r.problem},{r.algorithm},{r.init},"
            f"{r.instance_seed},{r.iteration},{r.cost:.10g},{r.rel_error:.10g}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary_csv(records: list[RunRecord], path: Path) -> None:
    lines = [SUMMARY_HEADER]
    for row in aggregate(records):
        lines.append(
            f"{row.experiment},{row.algorithm},{row.init},{row.iteration},"
            f"{row.mean_rel_error:.10g},{row.stderr:.10g}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    return "dcqaoa-0.1.0"
