"""Command-line interface.

Subcommands::

    qcopt generate bv --qubits N --out FILE
    qcopt metrics  --circuit FILE
    qcopt oracle   --circuit FILE [--max-nodes N]
    qcopt optimize --circuit FILE --reward {ratio,rpow,fosel} --out CSV
                   [--summary JSON] [--best-circuit FILE] [hyperparameters]
    qcopt bench table1 --sizes 3,6,9,12 --rewards ratio,rpow --seeds 1,2,3,4,5
                   --out-dir DIR [--jobs N] [hyperparameters]

Hyperparameter flags may also come from a JSON ``--config`` file (same keys,
underscored); explicit flags win over the file, the file wins over built-in
defaults. ``QOPT_SEED`` is the seed fallback when ``--seed`` is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence, TextIO

from . import bench
from .circuit import (
    Circuit,
    CircuitError,
    depth,
    gate_count,
    interaction_strength,
    parse_circuit,
    serialize_circuit,
)
from .qlearn import AgentConfig, EpochRecord, train_with_best, with_auto_steps
from .rewards import RewardKind, RewardParams

CSV_HEADER = "epoch,steps,applied,cum_reward,final_depth,final_gate_count,final_str"

_HYPER_KEYS = (
    "epochs",
    "seed",
    "alpha",
    "gamma",
    "eps0",
    "eps_min",
    "eps_decay_frac",
    "cost_c",
    "max_steps",
)


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _write_csv(records: Sequence[EpochRecord], path: Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.epoch},{r.steps},{r.applied},{_fmt(r.cum_reward)},"
                f"{r.final_depth},{r.final_count},{_fmt(r.final_str)}\n"
            )


def _load_circuit(path: str) -> Circuit:
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", exit_code=1) from exc
    try:
        return parse_circuit(text)
    except CircuitError as exc:
        raise CliError(f"{path}: {exc}", exit_code=1) from exc


def _add_hyper_flags(parser: argparse.ArgumentParser) -> None:
    # Defaults stay None so config-file merging can tell "unset" apart.
    parser.add_argument("--config", help="JSON file with hyperparameter defaults")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--eps0", type=float)
    parser.add_argument("--eps-min", type=float, dest="eps_min")
    parser.add_argument("--eps-decay-frac", type=float, dest="eps_decay_frac")
    parser.add_argument("--cost-c", type=float, dest="cost_c")
    parser.add_argument("--max-steps", type=int, dest="max_steps")


def _resolve_config(args: argparse.Namespace) -> AgentConfig:
    merged: dict = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load config {args.config}: {exc}", exit_code=1) from exc
        unknown = set(file_values) - set(_HYPER_KEYS)
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_values)
    for key in _HYPER_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if "seed" not in merged and os.environ.get("QOPT_SEED"):
        merged["seed"] = int(os.environ["QOPT_SEED"])
    try:
        params = RewardParams(merged.pop("cost_c")) if "cost_c" in merged else RewardParams()
        if "eps_decay_frac" in merged:
            merged["eps_decay_fraction"] = merged.pop("eps_decay_frac")
        return AgentConfig(reward_params=params, **merged)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _parse_reward(name: str) -> RewardKind:
    try:
        return RewardKind(name)
    except ValueError:
        raise CliError(f"unknown reward {name!r}; choose from ratio, rpow, fosel") from None


def cmd_generate(args: argparse.Namespace) -> int:
    if args.qubits < 2:
        raise CliError("qubits must be >= 2")
    circuit = bench.generate_bv(args.qubits)
    try:
        Path(args.out).write_text(serialize_circuit(circuit))
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", exit_code=1) from exc
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    c = _load_circuit(args.circuit)
    print(
        json.dumps(
            {
                "depth": depth(c),
                "gate_count": gate_count(c),
                "interaction_strength": float(_fmt(interaction_strength(c))),
            }
        )
    )
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    c = _load_circuit(args.circuit)
    result = bench.oracle_min_depth(c, node_cap=args.max_nodes)
    print(
        json.dumps(
            {
                "min_depth": result.min_depth,
                "exhaustive": result.exhaustive,
                "nodes_explored": result.nodes_explored,
            }
        )
    )
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    start = _load_circuit(args.circuit)
    kind = _parse_reward(args.reward)
    cfg = with_auto_steps(replace(_resolve_config(args), reward_kind=kind), start)
    _, records, best = train_with_best(start, cfg)
    _write_csv(records, Path(args.out))
    if args.summary:
        row = bench.summarize(records, start.n_qubits, kind, seed=cfg.seed)
        Path(args.summary).write_text(json.dumps(row.to_dict(), indent=2) + "\n")
    if args.best_circuit:
        Path(args.best_circuit).write_text(serialize_circuit(best))
    return 0


def _rows_markdown(rows: Sequence[bench.SummaryRow]) -> str:
    head = (
        "| qubits | reward | seed | min(rew) | max(rew) | mind | fq(mind) | maxd | fq(maxd) |"
    )
    sep = "|" + "---|" * 9
    lines = [head, sep]
    for r in rows:
        seed = "median" if r.seed is None else str(r.seed)
        lines.append(
            f"| {r.qubits} | {r.reward_kind} | {seed} | {_fmt(r.min_rew)} | "
            f"{_fmt(r.max_rew)} | {r.min_depth} | {r.freq_min_depth} | "
            f"{r.max_depth} | {r.freq_max_depth} |"
        )
    return "\n".join(lines) + "\n"


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    kinds = [_parse_reward(r) for r in args.rewards.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")]
    if any(s < 2 for s in sizes):
        raise CliError("sizes must all be >= 2")
    cfg = _resolve_config(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = bench.run_experiments(sizes, kinds, cfg, seeds, jobs=args.jobs)
    rows: list[bench.SummaryRow] = []
    by_group: dict[tuple[int, RewardKind], list[bench.SummaryRow]] = {}
    for size, kind, seed, records in results:
        stem = f"bv{size}_{kind.value}_seed{seed}"
        _write_csv(records, out_dir / f"{stem}.csv")
        row = bench.summarize(records, size, kind, seed=seed)
        (out_dir / f"{stem}.summary.json").write_text(
            json.dumps(row.to_dict(), indent=2) + "\n"
        )
        rows.append(row)
        by_group.setdefault((size, kind), []).append(row)
    for group in by_group.values():
        rows.append(bench._median_row(group))
    rows.sort(key=lambda r: (r.qubits, r.reward_kind, r.seed is None, r.seed or 0))
    (out_dir / "summary.json").write_text(
        json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    )
    (out_dir / "summary.md").write_text(_rows_markdown(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcopt",
        description="Q-learning optimizer for CNOT+Hadamard circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a benchmark circuit")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    gen_bv = gen_sub.add_parser("bv", help="hidden-string query circuit")
    gen_bv.add_argument("--qubits", type=int, required=True)
    gen_bv.add_argument("--out", required=True)
    gen_bv.set_defaults(func=cmd_generate)

    met = sub.add_parser("metrics", help="print depth/count/strength of a circuit")
    met.add_argument("--circuit", required=True)
    met.set_defaults(func=cmd_metrics)

    orc = sub.add_parser("oracle", help="breadth-first minimum-depth search")
    orc.add_argument("--circuit", required=True)
    orc.add_argument("--max-nodes", type=int, default=100_000, dest="max_nodes")
    orc.set_defaults(func=cmd_oracle)

    opt = sub.add_parser("optimize", help="train an agent on one circuit")
    opt.add_argument("--circuit", required=True)
    opt.add_argument("--reward", required=True)
    opt.add_argument("--out", required=True, help="per-epoch CSV path")
    opt.add_argument("--summary", help="summary JSON path")
    opt.add_argument("--best-circuit", dest="best_circuit", help="write lowest-depth circuit")
    _add_hyper_flags(opt)
    opt.set_defaults(func=cmd_optimize)

    ben = sub.add_parser("bench", help="multi-run comparison harness")
    ben_sub = ben.add_subparsers(dest="table", required=True)
    table = ben_sub.add_parser("table1", help="size x reward-function sweep")
    table.add_argument("--sizes", default="3,6,9,12")
    table.add_argument("--rewards", default="ratio,rpow")
    table.add_argument("--seeds", default="1,2,3,4,5")
    table.add_argument("--out-dir", required=True, dest="out_dir")
    table.add_argument("--jobs", type=int, default=1)
    _add_hyper_flags(table)
    table.set_defaults(func=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None, *, stderr: TextIO = sys.stderr) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qcopt: {exc}", file=stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"qcopt: {exc}", file=stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
