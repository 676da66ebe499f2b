"""Command-line experiment runner.

Subcommands: gen, train, bench, cd-compare, concentration, param-count.
Exit codes: 0 success, 2 bad arguments, 3 missing artifact file,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments, metalearn, problems
from .circuits import DCQAOA, QAOA
from .metalearn import GRU, LSTM, TrainConfig

EXIT_BAD_ARGS = 2
EXIT_MISSING_ARTIFACT = 3
EXIT_NUMERICAL = 4

_PROBLEMS = {
    "maxcut3r": problems.MAXCUT_3REGULAR,
    "maxcutw": problems.MAXCUT_COMPLETE_WEIGHTED,
    "sk": problems.SK,
}
_CD_TERMS = {"y": "Y", "zy": "ZY", "yz": "YZ", "xy": "XY", "yx": "YX"}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("."))


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dcqaoa")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a problem instance as JSON")
    g.add_argument("--problem", choices=_PROBLEMS, required=True)
    g.add_argument("--qubits", type=int, required=True)
    _add_common(g)

    t = sub.add_parser("train", help="train an initializer network")
    t.add_argument("--problem", choices=_PROBLEMS, required=True)
    t.add_argument("--qubits", type=int, default=10)
    t.add_argument("--layers", type=int, default=2)
    t.add_argument("--algorithm", choices=(QAOA, DCQAOA), default=DCQAOA)
    t.add_argument("--cell", choices=(LSTM, GRU), default=LSTM)
    t.add_argument("--cd-term", choices=_CD_TERMS, default="zy")
    t.add_argument("--horizon", type=int, default=6)
    t.add_argument("--epochs", type=int, default=10)
    t.add_argument("--tol", type=float, default=0.01)
    t.add_argument("--lr", type=float, default=None)
    t.add_argument("--optimizer", choices=("adam", "adagrad"), default=None)
    t.add_argument("--train-size", type=int, default=None)
    _add_common(t)

    b = sub.add_parser("bench", help="benchmark initializations on held-out instances")
    b.add_argument("--problem", choices=_PROBLEMS, required=True)
    b.add_argument("--qubits", type=int, default=10)
    b.add_argument("--layers", type=int, default=2)
    b.add_argument("--algorithm", choices=(QAOA, DCQAOA), action="append")
    b.add_argument("--cd-term", choices=_CD_TERMS, default="zy")
    b.add_argument("--instances", type=int, default=10)
    b.add_argument("--iterations", type=int, default=None)
    b.add_argument("--weights", type=Path, action="append", default=[])
    _add_common(b)

    c = sub.add_parser("cd-compare", help="compare CD pool classes")
    c.add_argument("--qubits", type=int, default=8)
    c.add_argument("--layers", type=int, default=1)
    c.add_argument("--train-size", type=int, default=100)
    c.add_argument("--instances", type=int, default=5)
    c.add_argument("--iterations", type=int, default=100)
    c.add_argument("--cell", choices=(LSTM, GRU), default=LSTM)
    _add_common(c)

    k = sub.add_parser("concentration", help="parameter-transfer study")
    k.add_argument("--layers", type=int, default=2)
    k.add_argument("--instances", type=int, default=10)
    k.add_argument("--iterations", type=int, default=100)
    k.add_argument("--cd-term", choices=_CD_TERMS, default="zy")
    k.add_argument("--include-12", action="store_true", help="add the 12-node point")
    k.add_argument("--weights", type=Path, action="append", default=[])
    _add_common(k)

    n = sub.add_parser("param-count", help="trainable-parameter count of a cell")
    n.add_argument("--cell", choices=(LSTM, GRU), required=True)
    n.add_argument("--algorithm", choices=(QAOA, DCQAOA), required=True)
    n.add_argument("--layers", type=int, required=True)
    return ap


def _write_meta(out: Path, args: argparse.Namespace) -> None:
    meta = {k: str(v) if isinstance(v, Path) else v for k, v in vars(args).items()}
    meta["version"] = experiments.version_string()
    (out / "run_meta.json").write_text(json.dumps(meta, indent=2, default=str) + "\n")


def _load_weights(paths: list[Path]) -> dict[tuple[str, str], metalearn.TrainResult]:
    trained = {}
    for path in paths:
        if not path.exists():
            print(f"missing weights file: {path}", file=sys.stderr)
            raise SystemExit(EXIT_MISSING_ARTIFACT)
        result = metalearn.weights_from_json(path.read_text())
        trained[(result.algorithm, result.weights.kind)] = result
    return trained


def _emit(records, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    experiments.write_records_csv(records, out / "records.csv")
    experiments.write_summary_csv(records, out / "summary.csv")


def _cmd_gen(args) -> int:
    kind = _PROBLEMS[args.problem]
    inst = problems.generate(kind, args.qubits, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{args.problem}_n{args.qubits}_s{args.seed}.json"
    path.write_text(problems.to_json(inst) + "\n")
    print(path)
    return 0


def _cmd_train(args) -> int:
    kind = _PROBLEMS[args.problem]
    cfg = experiments.default_train_config(kind, args.seed, args.train_size)
    if args.lr is not None:
        cfg.learning_rate = args.lr
    if args.optimizer is not None:
        cfg.optimizer_kind = args.optimizer
    cfg.horizon = args.horizon
    cfg.max_epochs = args.epochs
    cfg.tolerance = args.tol
    result = metalearn.train(
        args.cell, kind, args.qubits, args.layers, args.algorithm, cfg,
        cd_class=_CD_TERMS[args.cd_term],
    )
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "weights.json").write_text(metalearn.weights_to_json(result) + "\n")
    _write_meta(args.out, args)
    print(f"epoch losses: {result.epoch_losses}")
    return 0


def _cmd_bench(args) -> int:
    kind = _PROBLEMS[args.problem]
    trained = _load_weights(args.weights)
    inits = [experiments.RANDOM_INIT] + sorted({cell for _, cell in trained})
    algorithms = tuple(args.algorithm) if args.algorithm else (QAOA, DCQAOA)
    records = experiments.run_benchmark(
        kind, n=args.qubits, p=args.layers, iterations=args.iterations,
        instances=args.instances, inits=tuple(inits), seed=args.seed,
        trained=trained, algorithms=algorithms, cd_class=_CD_TERMS[args.cd_term],
    )
    _emit(records, args.out)
    _write_meta(args.out, args)
    return 0


def _cmd_cd_compare(args) -> int:
    records = experiments.run_cd_compare(
        n=args.qubits, p=args.layers, train_size=args.train_size,
        eval_instances=args.instances, iterations=args.iterations,
        seed=args.seed, cell=args.cell,
    )
    _emit(records, args.out)
    _write_meta(args.out, args)
    return 0


def _cmd_concentration(args) -> int:
    nodes = (10, 12, 14, 16, 18) if args.include_12 else (10, 14, 16, 18)
    trained = _load_weights(args.weights) or None
    records = experiments.run_concentration(
        node_list=nodes, p=args.layers, instances=args.instances,
        iterations=args.iterations, seed=args.seed, trained=trained,
        cd_class=_CD_TERMS[args.cd_term],
    )
    _emit(records, args.out)
    _write_meta(args.out, args)
    return 0


def _cmd_param_count(args) -> int:
    print(metalearn.trainable_param_count(args.cell, args.algorithm, args.layers))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "bench": _cmd_bench,
    "cd-compare": _cmd_cd_compare,
    "concentration": _cmd_concentration,
    "param-count": _cmd_param_count,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"missing artifact: {exc}", file=sys.stderr)
        return EXIT_MISSING_ARTIFACT
    except (ValueError, KeyError) as exc:
        print(f"bad arguments: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
