"""
CLI script to merge the results of the simulation studies into a single
report of empirical size and power curves.

Every results CSV in the results directory is expected to be named
`<family>__<variant>__n<n>.csv`, as produced by the `simulate` stages of the
dvc pipeline.

Usage:
    python build_report.py --save-dir <directory> --dir-results <results_directory> [--loglevel <level>]

Arguments:
    --save-dir: Directory to save the generated report.
    --dir-results: Directory containing the results CSV files.
    --loglevel: Set the logging level (default is 'info').

The report will be saved as 'report.yaml' in the specified save directory.
"""

import argparse
import logging
from pathlib import Path

from flm_maxtest.harness.study import PowerTable, read_results
from flm_maxtest.utils import yaml_write


def make_cli_parser() -> argparse.ArgumentParser:
    """
    Make the CLI parser.
    """
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--save-dir",
        help="directory to save the report.",
        type=Path,
        default=Path("./data/reporting/"),
    )
    parser.add_argument(
        "--dir-results",
        help="directory containing the results of the simulation studies.",
        type=Path,
        default=Path("./data/processed/studies/"),
    )
    parser.add_argument(
        "-log",
        "--loglevel",
        default="info",
        help="Provide logging level. Example --loglevel debug, default=info",
    )
    return parser


def validate_parsed_args(args: dict) -> bool:
    """
    Return whether the parsed args are valid.
    """
    if not args["dir_results"].exists():
        logging.error(
            f"invalid --dir-results, dir {args['dir_results']} does not exist"
        )
        return False
    else:
        return True


def parse_filepath_results(filepath_results: Path) -> dict:
    """
    Extract the study design from a results filename.

    Returns:
        design (dict): family, variant and n of the study.
    """
    family, variant, n = filepath_results.stem.split("__")
    return {"family": family, "variant": variant, "n": int(n.removeprefix("n"))}


def summarize_table(table: PowerTable) -> dict:
    """
    Returns:
        summary (dict): the empirical size (rate at r = 0, when present) and
        the power curve of a study.
    """
    size = next((row.rate for row in table.rows if row.r == 0.0), None)
    return {
        "size": size,
        "replications": table.rows[0].reps if table.rows else 0,
        "curve": [
            {"r": row.r, "rate": row.rate, "mean_tau": row.mean_tau}
            for row in table.rows
        ],
    }


def make_report(dir_results: Path) -> dict:
    """
    Returns:
        report (dict): one entry per study, sorted by family, variant and n.
    """
    studies = []
    for filepath_results in sorted(dir_results.glob("*.csv")):
        try:
            design = parse_filepath_results(filepath_results)
        except ValueError:
            logging.warning(f"skipping {filepath_results}, unexpected filename")
            continue
        table = read_results(filepath_results)
        studies.append({**design, **summarize_table(table)})
    studies.sort(key=lambda s: (s["family"], s["variant"], s["n"]))
    return {"studies": studies}


if __name__ == "__main__":
    cli_parser = make_cli_parser()
    args = vars(cli_parser.parse_args())
    logger = logging.getLogger(__name__)
    logging.basicConfig(level=args["loglevel"].upper())
    if not validate_parsed_args(args):
        exit(1)
    else:
        logger.info(args)
        save_dir = args["save_dir"]
        save_dir.mkdir(parents=True, exist_ok=True)
        report = make_report(dir_results=args["dir_results"])
        logger.info(f"found {len(report['studies'])} studies in {args['dir_results']}")
        filepath_report = save_dir / "report.yaml"
        logger.info(f"saving report.yaml file in {save_dir}")
        yaml_write(to=filepath_report, data=report)
        exit(0)
