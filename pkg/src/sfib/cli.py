"""Command-line interface: ``sfib simulate | estimate | train``.

Exit codes: 0 success, 1 user error (bad flags, config or input files),
2 runtime failure.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys

from .datagen import read_samples_csv, write_samples_csv
from .errors import ConfigError, ReportIOError, SFError
from .harness import (
    RunTrajectory,
    SimulationConfig,
    aggregate,
    run_batch,
    run_data,
    train_sf,
)
from .infotheory import (
    DEFAULT_BINS,
    discretize,
    fdl_objective_terms,
    joint_counts,
    make_bin_spec,
    mutual_information,
)
from .optim import OptimizerConfig
from .report import export_csv, render_dynamics_panels, render_information_plane, run_csv_text
from .sf_core import DEFAULT_EPSILON, init_weights, sf_forward

log = logging.getLogger("sfib")

EXIT_OK, EXIT_USER, EXIT_RUNTIME = 0, 1, 2

_TOP_KEYS = {"sim", "repetitions", "base_seed", "bin_count", "epsilon", "eval_split",
             "optimizer", "out_dir", "workers"}
_OPTIMIZER_KEYS = {f.name for f in dataclasses.fields(OptimizerConfig)}


class UserError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USER, f"{self.prog}: error: {message}\n")


def _parse_sim(value):
    if value == "all":
        return "all"
    try:
        sim = int(value)
    except ValueError:
        sim = None
    if sim not in (1, 2, 3, 4):
        raise argparse.ArgumentTypeError(f"invalid simulation {value!r}: valid range is 1-4 or 'all'")
    return sim


def _positive_int(value):
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def load_config(path):
    """Read and validate a JSON config file; unknown keys are rejected."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UserError(f"cannot read config {path}: {exc}")
    if not isinstance(doc, dict):
        raise UserError(f"config {path} must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise UserError(f"unknown config keys: {', '.join(sorted(unknown))}")
    opt = doc.get("optimizer", {})
    if not isinstance(opt, dict):
        raise UserError("'optimizer' must be a JSON object")
    unknown = set(opt) - _OPTIMIZER_KEYS
    if unknown:
        raise UserError(f"unknown optimizer keys: {', '.join(sorted(unknown))}")
    if "sim" in doc:
        try:
            doc["sim"] = _parse_sim(str(doc["sim"]))
        except argparse.ArgumentTypeError as exc:
            raise UserError(str(exc))
    return doc


def merge_settings(args):
    """Config file values overridden by explicitly given flags."""
    doc = load_config(args.config) if args.config else {}
    opt = dict(doc.get("optimizer", {}))
    if args.optimizer is not None:
        opt["method"] = args.optimizer
    if args.max_iter is not None:
        opt["max_iterations"] = args.max_iter
    flags = {
        "sim": args.sim, "repetitions": args.reps, "base_seed": args.seed,
        "bin_count": args.bins, "eval_split": args.eval_split, "out_dir": args.out,
        "workers": args.workers,
    }
    merged = {**doc, **{k: v for k, v in flags.items() if v is not None}}
    merged["optimizer"] = opt
    if "sim" not in merged:
        raise UserError("no simulation given (use --sim or a config file)")
    if "out_dir" not in merged:
        raise UserError("no output directory given (use --out or a config file)")
    return merged


def _simulation_configs(settings):
    try:
        optimizer = OptimizerConfig(**settings["optimizer"])
        sims = [1, 2, 3, 4] if settings["sim"] == "all" else [settings["sim"]]
        common = {k: settings[k] for k in ("repetitions", "base_seed", "bin_count", "epsilon",
                                           "eval_split") if k in settings}
        return [SimulationConfig(sim_id=s, optimizer=optimizer, **common) for s in sims]
    except (TypeError, ConfigError) as exc:
        raise UserError(f"invalid configuration: {exc}")


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise UserError(f"cannot create output directory {path}: {exc}")
    if not os.access(path, os.W_OK):
        raise UserError(f"output directory {path} is not writable")


def write_simulation_outputs(config, runs, out_dir, dump_data=False):
    agg = aggregate(runs)
    written = export_csv(runs, agg, out_dir)
    sim = config.sim_id
    written.append(render_information_plane(agg, os.path.join(out_dir, f"information_plane_{sim}.svg")))
    written.append(render_dynamics_panels(runs, os.path.join(out_dir, f"dynamics_{sim}.svg")))
    if dump_data:
        for run in runs:
            _, X_eval = run_data(config, run.repetition_index)
            rep = run.repetition_index
            x_path = os.path.join(out_dir, f"x_eval_{sim}_{rep}.csv")
            t_path = os.path.join(out_dir, f"t_final_{sim}_{rep}.csv")
            write_samples_csv(x_path, X_eval)
            write_samples_csv(t_path, sf_forward(run.final_weights, X_eval, config.epsilon))
            written += [x_path, t_path]
    return written


def cmd_simulate(args):
    settings = merge_settings(args)
    configs = _simulation_configs(settings)
    root = settings["out_dir"]
    _ensure_dir(root)
    workers = int(settings.get("workers", 1))
    for config in configs:
        out_dir = root if len(configs) == 1 else os.path.join(root, f"sim_{config.sim_id}")
        _ensure_dir(out_dir)
        log.info("simulation %d: %d repetitions, seed %d", config.sim_id, config.repetitions,
                 config.base_seed)
        runs = run_batch(config, workers=workers)
        for run in runs:
            log.info("  repetition %d: %d iterations (%s)", run.repetition_index,
                     len(run.records) - 1, run.termination)
        write_simulation_outputs(config, runs, out_dir, dump_data=args.dump_data)
    return EXIT_OK


def _read_matrix(path):
    try:
        return read_samples_csv(path)
    except (OSError, ValueError) as exc:
        raise UserError(f"cannot parse {path}: {exc}")


def cmd_estimate(args):
    X = _read_matrix(args.x)
    T = _read_matrix(args.t)
    if X.shape[1] != T.shape[1]:
        raise UserError(f"sample counts differ: {X.shape[1]} in {args.x}, {T.shape[1]} in {args.t}")
    t_range = (0.0, 1.0) if args.t_range == "unit" else None
    xb = discretize(X, make_bin_spec(X, args.bins))
    tb = discretize(T, make_bin_spec(T, args.bins, t_range))
    _, kl_u, h = fdl_objective_terms(xb, tb, args.bins, T.shape[0])
    mi = mutual_information(joint_counts(xb, tb))
    print(f"mi_xt_bits={mi:.17g} entropy_t_bits={h:.17g} kl_uniform_bits={kl_u:.17g}")
    return EXIT_OK


def cmd_train(args):
    X = _read_matrix(args.data)
    try:
        optimizer = OptimizerConfig(method=args.optimizer,
                                    **({"max_iterations": args.max_iter} if args.max_iter else {}))
    except ConfigError as exc:
        raise UserError(str(exc))
    _ensure_dir(args.out)
    W0 = init_weights(args.features, X.shape[0], args.seed)
    W, records, reason = train_sf(X, X, W0, args.bins, DEFAULT_EPSILON, optimizer)
    log.info("trained %d features: %d iterations (%s)", args.features, len(records) - 1, reason)
    run = RunTrajectory("train", 0, args.seed, records, reason, W)
    try:
        with open(os.path.join(args.out, "weights.csv"), "w", newline="") as fh:
            for row in W:
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")
        with open(os.path.join(args.out, "trajectory.csv"), "w", newline="") as fh:
            fh.write(run_csv_text(run))
    except OSError as exc:
        raise UserError(f"cannot write to {args.out}: {exc}")
    write_samples_csv(os.path.join(args.out, "representation.csv"), sf_forward(W, X))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="sfib", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run the SF simulations and write CSV/SVG reports")
    p.add_argument("--sim", type=_parse_sim, help="simulation id 1-4 or 'all'")
    p.add_argument("--reps", type=_positive_int, help="repetitions (default 10)")
    p.add_argument("--seed", type=int, help="base seed (default 42)")
    p.add_argument("--bins", type=_positive_int, help="bins per dimension (default 30)")
    p.add_argument("--optimizer", choices=["lbfgs", "gd"])
    p.add_argument("--max-iter", type=_positive_int, help="iteration budget (default 200)")
    p.add_argument("--eval-split", choices=["test", "train"])
    p.add_argument("--workers", type=_positive_int, help="parallel repetitions (default 1)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--dump-data", action="store_true",
                   help="also write evaluation inputs and final representations as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate I[X;T], H[T] from two sample CSV files")
    p.add_argument("--x", required=True, help="input samples CSV")
    p.add_argument("--t", required=True, help="representation samples CSV")
    p.add_argument("--bins", type=_positive_int, default=DEFAULT_BINS)
    p.add_argument("--t-range", choices=["unit", "data"], default="unit",
                   help="bin T over [0, 1] (default) or over its observed range")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("train", help="train SF on a sample CSV file")
    p.add_argument("--data", required=True, help="training samples CSV")
    p.add_argument("--features", type=_positive_int, required=True)
    p.add_argument("--optimizer", choices=["lbfgs", "gd"], default="lbfgs")
    p.add_argument("--max-iter", type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=_positive_int, default=DEFAULT_BINS)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_train)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if getattr(args, "bins", None) is not None and args.bins < 2:
        parser.error("--bins must be >= 2")
    try:
        return args.func(args)
    except (UserError, ConfigError, ReportIOError) as exc:
        print(f"sfib: error: {exc}", file=sys.stderr)
        return EXIT_USER
    except SFError as exc:
        print(f"sfib: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
