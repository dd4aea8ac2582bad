"""
Command line interface.

Usage:
    flm-maxtest test (--x <x.csv> | --x-scalars <x.csv> | --x-groups <groups.txt>)... --y-scalars <y.csv> [--p1 <int>] [--p2 <int>] [--tau <float> | --tau-grid <floats>] [--b <int>] [--alpha <float>] [--seed <int>] [--basis empirical|fourier] [-log <log_level>]
    flm-maxtest simulate (--config <config.yaml> | --family <family> --variant <variant> --n <int> ...) --save-path <results.csv> [--workers <int>] [-log <log_level>]
    flm-maxtest profile --trajectories <trajectories.csv> (--preset children|young-adults | --thresholds <floats>) --save-path <profiles.csv> [-log <log_level>]

Subcommands:
    test: run the bootstrap max-statistic test of β = 0 on a dataset and print
        the result as JSON.
    simulate: run a Monte Carlo size/power study, write the results CSV and
        print one summary line per signal strength.
    profile: turn activity trajectories into activity profiles.

Logs go to stderr, results to stdout or files.
"""

import argparse
import logging
from pathlib import Path

from flm_maxtest.activity import (
    THRESHOLD_PRESETS,
    activity_profile,
    one_hot_encode,
    profiles_to_sample,
    read_group_labels,
    read_trajectories,
)
from flm_maxtest.constants import (
    DEFAULT_BOOTSTRAP_REPLICATES,
    DEFAULT_INNER_BOOTSTRAP_REPLICATES,
    DEFAULT_SIGNIFICANCE,
    MIN_BOOTSTRAP_REPLICATES,
)
from flm_maxtest.errors import FLMMaxTestError, ValidationError
from flm_maxtest.harness.config import read_study_document, validate_study_config
from flm_maxtest.harness.study import run_study, write_results
from flm_maxtest.hilbert.io import read_sample, write_sample
from flm_maxtest.hilbert.space import Sample
from flm_maxtest.maxtest.engine import TestConfig, run_test
from flm_maxtest.simgen.slopes import FAMILIES, VARIANTS
from flm_maxtest.tauselect import TauPolicy
from flm_maxtest.utils import default_workers

logger = logging.getLogger(__name__)


def make_cli_parser() -> argparse.ArgumentParser:
    """
    Make the CLI parser.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-log",
        "--loglevel",
        default="info",
        help="Provide logging level. Example --loglevel debug, default=info",
    )

    parser = argparse.ArgumentParser(prog="flm-maxtest")
    subparsers = parser.add_subparsers(dest="command", required=True)

    test = subparsers.add_parser("test", parents=[common], help="test β = 0 on a dataset")
    test.add_argument("--x", help="CSV (or JSON) of the functional predictors.", type=Path)
    test.add_argument("--x-scalars", help="CSV of the scalar predictors.", type=Path)
    test.add_argument(
        "--x-groups",
        help="one group label per line, one-hot encoded into scalar predictors.",
        type=Path,
    )
    test.add_argument("--y", help="CSV (or JSON) of the functional responses.", type=Path)
    test.add_argument("--y-scalars", help="CSV of the scalar responses.", type=Path)
    test.add_argument("--p1", help="number of predictor basis elements.", type=int)
    test.add_argument("--p2", help="number of response basis elements.", type=int)
    tau = test.add_mutually_exclusive_group()
    tau.add_argument("--tau", help="fixed partial standardization exponent.", type=float)
    tau.add_argument(
        "--tau-grid",
        help="candidate exponents for the data-driven selection.",
        type=float,
        nargs="+",
    )
    test.add_argument(
        "--inner-b",
        help="bootstrap replicates of the tau selection.",
        type=int,
        default=DEFAULT_INNER_BOOTSTRAP_REPLICATES,
    )
    test.add_argument(
        "--b",
        help="bootstrap replicates of the test.",
        type=int,
        default=DEFAULT_BOOTSTRAP_REPLICATES,
    )
    test.add_argument(
        "--alpha",
        help="significance level.",
        type=float,
        default=DEFAULT_SIGNIFICANCE,
    )
    test.add_argument("--seed", help="random seed.", type=int, default=0)
    test.add_argument(
        "--basis",
        help="bases of the predictor and response spaces.",
        choices=["empirical", "fourier"],
        default="empirical",
    )

    simulate = subparsers.add_parser(
        "simulate", parents=[common], help="run a Monte Carlo size/power study"
    )
    simulate.add_argument("--config", help="YAML or JSON study configuration.", type=Path)
    simulate.add_argument("--family", help=f"one of {', '.join(FAMILIES)}.")
    simulate.add_argument("--variant", help=f"one of {', '.join(VARIANTS)}.")
    simulate.add_argument("--n", help="sample size.", type=int)
    simulate.add_argument("--r-grid", help="signal strengths.", type=float, nargs="+")
    simulate.add_argument("--replications", help="replications per signal strength.", type=int)
    simulate.add_argument("--bootstrap", help="bootstrap replicates per test.", type=int)
    simulate.add_argument("--alpha", help="significance level.", type=float)
    sim_tau = simulate.add_mutually_exclusive_group()
    sim_tau.add_argument("--tau", help="fixed partial standardization exponent.", type=float)
    sim_tau.add_argument("--tau-grid", help="candidate exponents.", type=float, nargs="+")
    simulate.add_argument("--inner-b", help="bootstrap replicates of the tau selection.", type=int)
    simulate.add_argument("--seed", help="master seed.", type=int)
    simulate.add_argument("--basis", help="empirical or fourier.")
    simulate.add_argument("--grid-size", help="points of the observation grid.", type=int)
    simulate.add_argument("--p1", help="number of predictor basis elements.", type=int)
    simulate.add_argument("--p2", help="number of response basis elements.", type=int)
    simulate.add_argument(
        "--record-timing",
        help="store wall times in the results.",
        action="store_true",
        default=None,
    )
    simulate.add_argument(
        "--save-path",
        help="results CSV.",
        type=Path,
        default=Path("./data/processed/results.csv"),
    )
    simulate.add_argument(
        "--workers",
        help="worker processes, defaults to $FLM_MAXTEST_WORKERS or 1.",
        type=int,
        default=None,
    )

    profile = subparsers.add_parser(
        "profile", parents=[common], help="compute activity profiles"
    )
    profile.add_argument(
        "--trajectories",
        help="CSV with one row of per-minute readings per subject.",
        type=Path,
        required=True,
    )
    thresholds = profile.add_mutually_exclusive_group()
    thresholds.add_argument(
        "--preset",
        help="threshold grid preset.",
        choices=list(THRESHOLD_PRESETS),
        default="children",
    )
    thresholds.add_argument("--thresholds", help="intensity thresholds.", type=float, nargs="+")
    profile.add_argument(
        "--save-path",
        help="CSV (or JSON) of the profiles over the threshold grid.",
        type=Path,
        default=Path("./data/processed/profiles.csv"),
    )
    return parser


def validate_parsed_args(args: dict) -> bool:
    """
    Return whether the parsed args are valid.
    """
    valid = True
    for key in ("x", "x_scalars", "x_groups", "y", "y_scalars", "config", "trajectories"):
        if args.get(key) is not None and not args[key].exists():
            logging.error(f"invalid --{key.replace('_', '-')}, file {args[key]} does not exist")
            valid = False
    alpha = args.get("alpha")
    if alpha is not None and not 0 < alpha < 1:
        logging.error(f"invalid --alpha {alpha}, expected a value in (0, 1)")
        valid = False
    tau = args.get("tau")
    if tau is not None and not 0 <= tau < 1:
        logging.error(f"invalid --tau {tau}, expected a value in [0, 1)")
        valid = False
    workers = args.get("workers")
    if workers is not None and workers < 1:
        logging.error(f"invalid --workers {workers}, expected a positive integer")
        valid = False

    if args["command"] == "test":
        if all(args[key] is None for key in ("x", "x_scalars", "x_groups")):
            logging.error("missing predictors, provide --x, --x-scalars and/or --x-groups")
            valid = False
        if args["y"] is None and args["y_scalars"] is None:
            logging.error("missing responses, provide --y and/or --y-scalars")
            valid = False
        if args["b"] < MIN_BOOTSTRAP_REPLICATES:
            logging.error(f"invalid --b {args['b']}, expected at least {MIN_BOOTSTRAP_REPLICATES}")
            valid = False
    if args["command"] == "simulate":
        inline = [k for k in ("family", "variant", "n") if args[k] is None]
        if args["config"] is None and inline:
            logging.error(
                "provide --config or the inline flags "
                + ", ".join(f"--{k}" for k in inline)
            )
            valid = False
    return valid


def tau_policy_from_args(args: dict) -> TauPolicy:
    if args["tau"] is not None:
        return TauPolicy.fixed(args["tau"])
    if args["tau_grid"] is not None:
        return TauPolicy.over_grid(tuple(args["tau_grid"]), inner_b=args["inner_b"])
    return TauPolicy(inner_b=args["inner_b"])


def read_predictors(args: dict) -> Sample:
    """
    The functional and scalar predictors followed by the one-hot encoded
    group labels.

    Raises:
        ValidationError: malformed files, or files with different numbers of
        observations.
    """
    parts = []
    if args["x"] is not None or args["x_scalars"] is not None:
        parts.append(read_sample(args["x"], args["x_scalars"]))
    if args["x_groups"] is not None:
        groups, columns = one_hot_encode(read_group_labels(args["x_groups"]))
        logger.info(f"group indicators for {columns}")
        if parts and parts[0].n != groups.n:
            raise ValidationError(
                "predictor files disagree on the number of observations",
                [
                    f"{args['x_groups']}: {groups.n} labels",
                    f"other predictors: {parts[0].n} rows",
                ],
            )
        parts.append(groups)
    return parts[0] if len(parts) == 1 else Sample.concat(*parts)


def read_pair(args: dict) -> tuple[Sample, Sample]:
    """
    Raises:
        ValidationError: malformed files, or X and Y with different numbers
        of observations.
    """
    x = read_predictors(args)
    y = read_sample(args["y"], args["y_scalars"])
    if x.n != y.n:
        x_files = " + ".join(
            str(p) for p in (args["x"], args["x_scalars"], args["x_groups"]) if p
        )
        y_files = " + ".join(str(p) for p in (args["y"], args["y_scalars"]) if p)
        raise ValidationError(
            "X and Y disagree on the number of observations",
            [f"X ({x_files}): {x.n} rows", f"Y ({y_files}): {y.n} rows"],
        )
    return x, y


def command_test(args: dict) -> int:
    x, y = read_pair(args)
    config = TestConfig(
        p1=args["p1"],
        p2=args["p2"],
        tau=tau_policy_from_args(args),
        b=args["b"],
        significance=args["alpha"],
        seed=args["seed"],
        basis=args["basis"],
    )
    result = run_test(x, y, config)
    logger.info(f"reject={result.reject}, p_value={result.p_value:.4f}, tau={result.tau}")
    print(result.to_json())
    return 0


def study_document_from_args(args: dict) -> dict:
    """
    The configuration file content (if any) overridden by the inline flags.
    """
    raw = read_study_document(args["config"]) if args["config"] is not None else {}
    overrides = {
        "family": args["family"],
        "variant": args["variant"],
        "n": args["n"],
        "r_grid": args["r_grid"],
        "replications": args["replications"],
        "bootstrap": args["bootstrap"],
        "significance": args["alpha"],
        "seed": args["seed"],
        "basis": args["basis"],
        "grid_size": args["grid_size"],
        "p1": args["p1"],
        "p2": args["p2"],
        "record_timing": args["record_timing"],
    }
    raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}
    if args["tau"] is not None:
        raw["tau"] = {"mode": "fixed", "fixed_value": args["tau"]}
    elif args["tau_grid"] is not None:
        raw["tau"] = {"mode": "grid", "grid": args["tau_grid"]}
    tau = raw.get("tau", {})
    if args["inner_b"] is not None and isinstance(tau, dict) and tau.get("mode", "grid") == "grid":
        raw["tau"] = {**tau, "inner_b": args["inner_b"]}
    return raw


def command_simulate(args: dict) -> int:
    config = validate_study_config(study_document_from_args(args))
    workers = args["workers"] or default_workers()
    logger.info(f"running study {config.to_dict()} with {workers} worker(s)")
    table = run_study(config, workers=workers)
    write_results(table, args["save_path"])
    for row in table.rows:
        print(
            f"r={row.r} rejections={row.rejections}/{row.reps} "
            f"rate={row.rate:.4f} mean_tau={row.mean_tau:.3f}"
        )
    return 0


def command_profile(args: dict) -> int:
    thresholds = (
        args["thresholds"]
        if args["thresholds"] is not None
        else THRESHOLD_PRESETS[args["preset"]]
    )
    trajectories = read_trajectories(args["trajectories"])
    profiles = [activity_profile(t, thresholds) for t in trajectories]
    sample = profiles_to_sample(profiles)
    write_sample(sample, path=args["save_path"])
    logger.info(f"{sample.n} profiles written to {args['save_path']}")
    return 0


COMMANDS = {
    "test": command_test,
    "simulate": command_simulate,
    "profile": command_profile,
}


def main(argv: list[str] | None = None) -> int:
    cli_parser = make_cli_parser()
    args = vars(cli_parser.parse_args(argv))
    logging.basicConfig(level=args["loglevel"].upper())
    if not validate_parsed_args(args):
        return 1
    logger.debug(args)
    try:
        return COMMANDS[args["command"]](args)
    except FLMMaxTestError as e:
        logging.error(str(e))
        return 1


if __name__ == "__main__":
    exit(main())
