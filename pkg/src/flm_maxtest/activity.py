"""
Activity profiles of wearable accelerometer trajectories.

A trajectory holds one intensity reading per minute over up to a week. Its
profile Y(s) is the time, in days, spent at an intensity of at least s, so a
full week at a constant positive intensity has a profile equal to 7 up to that
intensity.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from flm_maxtest.constants import (
    MAX_ACTIVITY_DAYS,
    MAX_ACTIVITY_INTENSITY,
    MINUTES_PER_DAY,
    THRESHOLDS_CHILDREN,
    THRESHOLDS_YOUNG_ADULTS,
)
from flm_maxtest.errors import ValidationError
from flm_maxtest.hilbert.space import Grid, Layout, Sample

logger = logging.getLogger(__name__)

THRESHOLD_PRESETS = {
    "children": THRESHOLDS_CHILDREN,
    "young-adults": THRESHOLDS_YOUNG_ADULTS,
}


@dataclass(frozen=True, eq=False)
class ActivityTrajectory:
    """
    Attributes:
        readings: per-minute intensities in [0, 32767], at most 7 days.
        minutes_per_reading: sampling period of the readings.
    """

    readings: NDArray[np.float64]
    minutes_per_reading: int = 1

    def __post_init__(self):
        readings = np.asarray(self.readings, dtype=np.float64).reshape(-1)
        problems = []
        if len(readings) * self.minutes_per_reading > MAX_ACTIVITY_DAYS * MINUTES_PER_DAY:
            problems.append(
                f"{len(readings)} readings exceed {MAX_ACTIVITY_DAYS} days of data"
            )
        if not np.all(np.isfinite(readings)):
            problems.append(f"non-finite readings at minutes {np.flatnonzero(~np.isfinite(readings)).tolist()[:10]}")
        else:
            outside = np.flatnonzero((readings < 0) | (readings > MAX_ACTIVITY_INTENSITY))
            if len(outside):
                problems.append(
                    f"{len(outside)} readings outside [0, {MAX_ACTIVITY_INTENSITY}], "
                    f"first at minute {outside[0]}: {readings[outside[0]]}"
                )
        if problems:
            raise ValidationError("invalid activity trajectory", problems)
        readings.setflags(write=False)
        object.__setattr__(self, "readings", readings)


@dataclass(frozen=True, eq=False)
class ActivityProfile:
    """
    Attributes:
        thresholds: increasing positive intensity thresholds s.
        values: Y(s) in days, non-increasing in s, within [0, 7].
    """

    thresholds: NDArray[np.float64]
    values: NDArray[np.float64]


def check_thresholds(thresholds: ArrayLike) -> NDArray[np.float64]:
    """
    Raises:
        ValidationError: unless the thresholds are strictly increasing and >= 1.
    """
    thresholds = np.asarray(thresholds, dtype=np.float64).reshape(-1)
    problems = []
    if len(thresholds) == 0:
        problems.append("no thresholds")
    elif not np.all(np.isfinite(thresholds)):
        problems.append("thresholds must be finite")
    else:
        if thresholds[0] < 1:
            problems.append(f"thresholds must be >= 1 (zero intensity is excluded), got {thresholds[0]}")
        if np.any(np.diff(thresholds) <= 0):
            problems.append("thresholds must be strictly increasing")
    if problems:
        raise ValidationError("invalid thresholds", problems)
    return thresholds


def activity_profile(traj: ActivityTrajectory, thresholds: ArrayLike) -> ActivityProfile:
    """
    Y(s) = (number of minutes with a reading >= s) / 1440 for every threshold s.
    """
    thresholds = check_thresholds(thresholds)
    readings = np.sort(traj.readings)
    at_least = len(readings) - np.searchsorted(readings, thresholds, side="left")
    values = at_least * traj.minutes_per_reading / MINUTES_PER_DAY
    return ActivityProfile(thresholds=thresholds, values=values)


def profiles_to_sample(profiles: list[ActivityProfile]) -> Sample:
    """
    Stack profiles computed on the same thresholds into a functional sample
    over the threshold grid.

    Raises:
        ValidationError: when the profiles disagree on their thresholds.
    """
    if not profiles:
        raise ValidationError("no activity profiles")
    thresholds = profiles[0].thresholds
    mismatched = [
        i for i, p in enumerate(profiles) if not np.array_equal(p.thresholds, thresholds)
    ]
    if mismatched:
        raise ValidationError(
            "profiles must share their thresholds",
            [f"profile {i}: different thresholds" for i in mismatched],
        )
    grid = Grid(thresholds)
    return Sample(layout=Layout(grids=(grid,)), values=np.vstack([p.values for p in profiles]))


def read_trajectories(path: Path) -> list[ActivityTrajectory]:
    """
    Read a CSV of trajectories, one row per subject and one column per
    minute. Rows may be shorter than the longest one (trailing cells empty).

    Raises:
        ValidationError: with the line numbers of invalid rows.
    """
    try:
        with open(path, "r") as f:
            width = max((line.count(",") + 1 for line in f if line.strip()), default=0)
        if width == 0:
            raise ValidationError(f"{path}: empty file")
        # the widest row fixes the columns, shorter rows are padded with ""
        df = pd.read_csv(
            path,
            header=None,
            names=list(range(width)),
            dtype=str,
            keep_default_na=False,
        )
    except pd.errors.ParserError as e:
        raise ValidationError(f"{path}: malformed CSV", [str(e).strip()])
    except OSError as e:
        raise ValidationError(f"{path}: cannot be read ({e.strerror})")

    trajectories = []
    problems = []
    for i, row in enumerate(df.itertuples(index=False, name=None)):
        cells = list(row)
        while cells and (pd.isna(cells[-1]) or cells[-1] == ""):
            cells.pop()
        try:
            readings = [float(cell) for cell in cells]
        except ValueError:
            problems.append(f"line {i + 1}: not a number")
            continue
        try:
            trajectories.append(ActivityTrajectory(readings=np.asarray(readings)))
        except ValidationError as e:
            problems.extend(f"line {i + 1}: {p}" for p in e.problems)
    if problems:
        raise ValidationError(f"{path}: invalid trajectories", problems)
    logger.info(f"read {len(trajectories)} trajectories from {path}")
    return trajectories


def read_group_labels(path: Path) -> list[str]:
    """
    Read one group label per line, in the order of the observations.

    Raises:
        ValidationError: with the line numbers of empty labels.
    """
    try:
        df = pd.read_csv(
            path,
            header=None,
            usecols=[0],
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise ValidationError(f"{path}: empty file")
    except pd.errors.ParserError as e:
        raise ValidationError(f"{path}: malformed CSV", [str(e).strip()])
    except OSError as e:
        raise ValidationError(f"{path}: cannot be read ({e.strerror})")

    labels = ["" if pd.isna(label) else str(label).strip() for label in df[0]]
    problems = [f"line {i + 1}: empty label" for i, label in enumerate(labels) if not label]
    if problems:
        raise ValidationError(f"{path}: invalid group labels", problems)
    logger.info(f"read {len(labels)} group labels from {path}")
    return labels



def one_hot_encode(
    labels: list[str],
    drop_first: bool = True,
) -> tuple[Sample, list[str]]:
    """
    Encode group labels as a vector predictor, for group comparisons with a
    function-on-vector test.

    Returns:
        sample (Sample): n x (groups - drop_first) indicator vectors.
        columns (list[str]): the group of every coordinate.
    """
    if not labels:
        raise ValidationError("no group labels")
    dummies = pd.get_dummies(pd.Series(labels, dtype="category"), drop_first=drop_first, dtype=float)
    if dummies.shape[1] == 0:
        raise ValidationError("a group comparison needs at least two groups")
    columns = [str(c) for c in dummies.columns]
    return Sample(layout=Layout(scalar_dim=len(columns)), values=dummies.to_numpy()), columns
