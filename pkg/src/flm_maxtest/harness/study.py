"""
Monte Carlo size and power studies.

Replicate `k` at signal strength index `i` draws every random number from the
seed stream (master seed, i, k), so a study is reproducible regardless of the
number of worker processes.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import pandas as pd
from tqdm import tqdm

from flm_maxtest.errors import ReplicateError, ResultsIOError
from flm_maxtest.harness.config import StudyConfig
from flm_maxtest.hilbert.space import Grid
from flm_maxtest.maxtest.engine import TestConfig, run_test
from flm_maxtest.rng import derive_seed
from flm_maxtest.simgen.datasets import DatasetConfig, generate_dataset
from flm_maxtest.simgen.slopes import SlopeSpec

logger = logging.getLogger(__name__)

COLUMNS = ["r", "rejections", "reps", "rate", "mean_tau", "seconds"]


@dataclass(frozen=True)
class PowerRow:
    r: float
    rejections: int
    reps: int
    rate: float
    mean_tau: float
    seconds: float


@dataclass(frozen=True)
class PowerTable:
    rows: tuple[PowerRow, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.rows)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(row) for row in self.rows], columns=COLUMNS)


def replicate_seed(master_seed: int, r_index: int, replicate: int) -> int:
    return derive_seed(master_seed, r_index, replicate)


def run_replicate(config: StudyConfig, r_index: int, replicate: int) -> tuple[bool, float]:
    """
    Generate one dataset at signal strength `config.r_grid[r_index]` and test it.

    Returns:
        reject (bool): the decision of the test.
        tau (float): the τ used by the test.

    Raises:
        ReplicateError: wrapping any failure of the generator or the test.
    """
    r = config.r_grid[r_index]
    seed = replicate_seed(config.seed, r_index, replicate)
    try:
        slope = SlopeSpec(
            family=config.family,
            variant=config.variant,
            r=r,
            k_trunc=config.k_trunc,
            q=config.q,
        )
        dataset_config = DatasetConfig(
            slope=slope,
            n=config.n,
            seed=seed,
            grid=Grid.uniform(0.0, 1.0, config.grid_size),
            design_seed=config.seed,
        )
        x, y = generate_dataset(dataset_config)
        test_config = TestConfig(
            p1=config.p1,
            p2=config.p2,
            tau=config.tau,
            b=config.bootstrap,
            significance=config.significance,
            seed=seed,
            basis=config.basis,
        )
        result = run_test(x, y, test_config)
    except Exception as e:
        raise ReplicateError(r, r_index, replicate, seed, f"{type(e).__name__}: {e}") from e
    logger.debug(f"r={r} replicate={replicate}: reject={result.reject}, tau={result.tau}")
    return result.reject, result.tau


def _run_replicate_task(task: tuple[StudyConfig, int, int]) -> tuple[bool, float]:
    return run_replicate(*task)


def run_study(
    config: StudyConfig,
    workers: int = 1,
    progress: bool = True,
) -> PowerTable:
    """
    Empirical rejection rates over `config.r_grid`, R replications each.

    Raises:
        ReplicateError: as soon as one replicate fails.
    """
    rows = []
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for r_index, r in enumerate(config.r_grid):
            start = time.perf_counter()
            tasks = [(config, r_index, k) for k in range(config.replications)]
            if executor is None:
                outcomes = map(_run_replicate_task, tasks)
            else:
                chunksize = max(1, len(tasks) // (4 * workers))
                outcomes = executor.map(_run_replicate_task, tasks, chunksize=chunksize)
            results = list(
                tqdm(outcomes, total=len(tasks), desc=f"r={r}", disable=not progress)
            )
            elapsed = time.perf_counter() - start

            rejections = sum(reject for reject, _ in results)
            reps = len(results)
            row = PowerRow(
                r=float(r),
                rejections=int(rejections),
                reps=reps,
                rate=rejections / reps,
                mean_tau=sum(tau for _, tau in results) / reps,
                seconds=elapsed if config.record_timing else 0.0,
            )
            logger.info(
                f"r={r}: {rejections}/{reps} rejections (rate {row.rate:.3f}, "
                f"mean tau {row.mean_tau:.3f}) in {elapsed:.1f}s"
            )
            rows.append(row)
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return PowerTable(rows=tuple(rows))


def write_results(table: PowerTable, path: Path) -> None:
    """
    Write the table as a CSV with the header
    r,rejections,reps,rate,mean_tau,seconds.

    Raises:
        ResultsIOError: when the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_dataframe().to_csv(path, index=False)
    except OSError as e:
        raise ResultsIOError(path, f"cannot be written ({e.strerror})") from e
    logger.info(f"results written to {path}")


def read_results(path: Path) -> PowerTable:
    """
    Read a results CSV back; floats are parsed so that a written table is
    reproduced exactly.

    Raises:
        ResultsIOError: when the file cannot be read or has the wrong columns.
    """
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except OSError as e:
        raise ResultsIOError(path, f"cannot be read ({e.strerror})") from e
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise ResultsIOError(path, f"malformed results file ({e})") from e
    if list(df.columns) != COLUMNS:
        raise ResultsIOError(path, f"expected columns {COLUMNS}, got {list(df.columns)}")
    rows = tuple(
        PowerRow(
            r=float(record["r"]),
            rejections=int(record["rejections"]),
            reps=int(record["reps"]),
            rate=float(record["rate"]),
            mean_tau=float(record["mean_tau"]),
            seconds=float(record["seconds"]),
        )
        for record in df.to_dict(orient="records")
    )
    return PowerTable(rows=rows)
