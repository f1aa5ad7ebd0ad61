"""Command-line harness: accounting queries, oracle sweeps, and experiments.

Usage: gspa <subcommand> [--config PATH] [--seed N] [--out PATH] [--trials N]
[--plot].  Configs are JSON documents; unknown keys are rejected and all
defaults are materialized into a sidecar ``<out>.config.json`` for
provenance.  Output is CSV with a fixed column order per subcommand plus a
trailing timestamp column (the data columns are deterministic given the
config and seed).

Exit codes: 0 success, 1 validation error, 2 mathematical guard
(non-identifiable / no amplification / bracket failure), 3 assertion failure
in check commands.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from pathlib import Path

from . import experiments
from .accountant import Cohort, NoAmplificationError
from .experiments import ResultTable
from .mechanisms import NonIdentifiableError
from .tradeoff import BracketError, PrivacyBudget

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_GUARD = 2
EXIT_CHECK_FAILED = 3

SLACK_TOLERANCE = -1e-9

DEFAULTS = {
    "account": {
        "distributions": ["constant"],
        "n_values": [1000],
        "target_delta": 1e-4,
        "repeat_first": 1000,
        "budgets": None,            # explicit [[eps, delta], ...] overrides
    },
    "mean": {
        "n": 10_000,
        "trials": 1000,
        "f_c_grid": None,
        "eps_c_grid": None,
        "f_c_default": 0.54,
        "eps_c_default": 0.1,
        "f_l": 0.09,
        "eps_moderate": 0.5,
        "eps_liberal": 1.0,
        "clip": [20.0, 80.0],
        "data_mean": 50.0,
        "data_sigma": 10.0,
        "zero_noise": False,
    },
    "freq": {
        "n": 10_000,
        "trials": 1000,
        "density": 0.7,
        "f_c_grid": None,
        "eps_c_grid": None,
        "f_c_default": 0.54,
        "eps_c_default": 0.1,
        "f_l": 0.09,
        "eps_moderate": 0.5,
        "eps_liberal": 1.0,
    },
    "oracle-check": {
        "n_values": list(range(2, 13)),
        "eps_values": [0.1, 0.5, 1.0, 2.0],
        "delta": 0.0,
        "alpha_step": 1e-3,
        "max_n": 200,
    },
    "tv-sweep": {
        "m_values": [10, 40, 160, 640],
        "eps0": 0.5,
        "delta0": 0.0,
    },
    "sgd": {
        "distributions": ["constant", "unif2", "unif3"],
        "seeds": [0, 1, 2, 3, 4],
        "clients": 20,
        "shard_size": 50,
        "epochs": 10,
        "dim": 20,
        "separation": 6.0,
        "n_test": 400,
        "delta_local": 1e-5,
        "clip_bound": 2.0,
        "step_size": 0.05,
        "model": "linear-softmax",
        "hidden_units": 32,
        "target_delta": 1e-4,
        "zero_noise": False,
    },
}

PLOTS = {
    "account": ("n", "central_epsilon", "distribution"),
    "mean": ("f_c", "mae", "sweep"),
    "freq": ("f_c", "mae", "sweep"),
    "oracle-check": ("n", "min_slack", "eps0"),
    "tv-sweep": ("m", "half_l1", None),
    "sgd": ("epoch", "test_accuracy", "distribution"),
}


def load_config(command: str, path: str | None) -> dict:
    """Merge a JSON config over the command defaults, rejecting unknown keys."""
    config = dict(DEFAULTS[command])
    if path is not None:
        with open(path, encoding="utf-8") as handle:
            user = json.load(handle)
        if not isinstance(user, dict):
            raise ValueError("config must be a JSON object")
        unknown = sorted(set(user) - set(config))
        if unknown:
            raise ValueError(f"unknown config keys for {command!r}: {unknown}")
        config.update(user)
    return config


def write_csv(table: ResultTable, path: Path) -> None:
    timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(table.columns) + ["timestamp"])
        for row in table.rows:
            writer.writerow(list(row) + [timestamp])


def write_config_sidecar(config: dict, seed: int, path: Path) -> None:
    sidecar = dict(config)
    sidecar["seed"] = seed
    with Path(str(path) + ".config.json").open("w", encoding="utf-8") as handle:
        json.dump(sidecar, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_plot(command: str, table: ResultTable, out: Path) -> Path:
    """Static SVG line plot of the command's headline metric."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x_col, y_col, series_col = PLOTS[command]
    fig, ax = plt.subplots(figsize=(6, 4))
    if series_col is None:
        ax.plot(table.column(x_col), table.column(y_col), marker="o")
    else:
        series = table.column(series_col)
        xs, ys = table.column(x_col), table.column(y_col)
        for name in dict.fromkeys(series):
            pairs = [(x, y) for x, y, s in zip(xs, ys, series) if s == name]
            ax.plot([p[0] for p in pairs], [p[1] for p in pairs],
                    marker="o", label=str(name))
        ax.legend()
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    ax.grid(True, alpha=0.4)
    plot_path = out.parent / f"{command}-{y_col}.svg"
    fig.savefig(plot_path, format="svg")
    plt.close(fig)
    return plot_path


def run_account(config: dict, seed: int, trials: int | None) -> ResultTable:
    if config["budgets"] is not None:
        budgets = tuple(PrivacyBudget(float(e), float(d))
                        for e, d in config["budgets"])
        return experiments.account_rows("explicit", Cohort(budgets),
                                        (config["target_delta"],), seed=seed)
    return experiments.account_sweep(
        config["distributions"], config["n_values"],
        target_delta=config["target_delta"], seed=seed,
        repeat_first=config["repeat_first"])


def run_mean(config: dict, seed: int, trials: int | None) -> ResultTable:
    return experiments.mean_experiment(
        n=config["n"], trials=trials or config["trials"],
        f_c_grid=config["f_c_grid"], eps_c_grid=config["eps_c_grid"],
        f_c_default=config["f_c_default"], eps_c_default=config["eps_c_default"],
        f_l=config["f_l"], eps_moderate=config["eps_moderate"],
        eps_liberal=config["eps_liberal"], clip=tuple(config["clip"]),
        data_mean=config["data_mean"], data_sigma=config["data_sigma"],
        seed=seed, zero_noise=config["zero_noise"])


def run_freq(config: dict, seed: int, trials: int | None) -> ResultTable:
    return experiments.freq_experiment(
        n=config["n"], trials=trials or config["trials"],
        density=config["density"], f_c_grid=config["f_c_grid"],
        eps_c_grid=config["eps_c_grid"], f_c_default=config["f_c_default"],
        eps_c_default=config["eps_c_default"], f_l=config["f_l"],
        eps_moderate=config["eps_moderate"], eps_liberal=config["eps_liberal"],
        seed=seed)


def run_oracle_check(config: dict, seed: int, trials: int | None) -> ResultTable:
    return experiments.oracle_check_sweep(
        config["n_values"], config["eps_values"], delta=config["delta"],
        alpha_step=config["alpha_step"], max_n=config["max_n"])


def run_tv_sweep(config: dict, seed: int, trials: int | None) -> ResultTable:
    return experiments.tv_sweep(config["m_values"], eps0=config["eps0"],
                                delta0=config["delta0"])


def run_sgd(config: dict, seed: int, trials: int | None) -> ResultTable:
    seeds = config["seeds"] if seed == 0 else [seed]
    return experiments.sgd_compare(
        config["distributions"], seeds, clients=config["clients"],
        shard_size=config["shard_size"], epochs=config["epochs"],
        dim=config["dim"], separation=config["separation"],
        n_test=config["n_test"], delta_local=config["delta_local"],
        clip_bound=config["clip_bound"], step_size=config["step_size"],
        model=config["model"], hidden_units=config["hidden_units"],
        target_delta=config["target_delta"], zero_noise=config["zero_noise"])


RUNNERS = {
    "account": run_account,
    "mean": run_mean,
    "freq": run_freq,
    "oracle-check": run_oracle_check,
    "tv-sweep": run_tv_sweep,
    "sgd": run_sgd,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gspa",
        description="Shuffle-model privacy accounting and experiment harness.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="JSON config path")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--out", default=None, help="CSV output path")
        cmd.add_argument("--trials", type=int, default=None,
                         help="override the trial count")
        cmd.add_argument("--plot", action="store_true",
                         help="also write an SVG line plot")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.command, args.config)
        table = RUNNERS[args.command](config, args.seed, args.trials)
    except (NoAmplificationError, NonIdentifiableError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    out = Path(args.out) if args.out else Path(f"{args.command}.csv")
    write_csv(table, out)
    write_config_sidecar(config, args.seed, out)
    print(f"wrote {out} ({len(table.rows)} rows)")
    if args.plot:
        print(f"wrote {write_plot(args.command, table, out)}")

    if args.command == "oracle-check":
        worst = min(table.column("min_slack"))
        if worst < SLACK_TOLERANCE:
            print(f"CHECK FAILED: min slack {worst} < {SLACK_TOLERANCE}",
                  file=sys.stderr)
            return EXIT_CHECK_FAILED
        print(f"check passed: min slack {worst:.3g}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
