"""
Reading and writing samples.

CSV layout for a functional sample: the first row holds the grid points, every
following row one observation. Scalar predictors live in a separate CSV with
one row per observation. The JSON mirror is a single document with the fields
`grid`, `rows` and `scalars` (each optional, but not all absent).
"""

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from flm_maxtest.errors import DomainError, ValidationError
from flm_maxtest.hilbert.space import Grid, Layout, Sample

logger = logging.getLogger(__name__)


def _parse_cells(df: pd.DataFrame) -> tuple[NDArray[np.float64], list[str]]:
    """
    Convert a frame of raw strings into floats, collecting one diagnostic per
    offending cell. Line numbers are 1-based file lines.
    """
    values = np.full(df.shape, np.nan)
    problems = []
    for i, row in enumerate(df.itertuples(index=False, name=None)):
        line = i + 1
        if all(cell is None or (isinstance(cell, float) and np.isnan(cell)) for cell in row):
            problems.append(f"line {line}: empty row")
            continue
        for j, cell in enumerate(row):
            if cell is None or (isinstance(cell, float) and np.isnan(cell)) or cell == "":
                problems.append(f"line {line}, column {j + 1}: missing value")
                continue
            try:
                value = float(cell)
            except ValueError:
                problems.append(f"line {line}, column {j + 1}: not a number {cell!r}")
                continue
            if not np.isfinite(value):
                problems.append(f"line {line}, column {j + 1}: non-finite value {cell!r}")
                continue
            values[i, j] = value
    return values, problems


def read_numeric_csv(path: Path) -> NDArray[np.float64]:
    """
    Read a header-less CSV of finite numbers.

    Raises:
        ValidationError: with line-numbered diagnostics for ragged rows,
        empty rows, missing or non-numeric values.
    """
    try:
        df = pd.read_csv(
            path,
            header=None,
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
    values, problems = _parse_cells(df)
    if problems:
        raise ValidationError(f"{path}: invalid numeric data", problems)
    return values


def _grid_from_row(row: NDArray[np.float64], origin: str) -> Grid:
    try:
        return Grid(row)
    except DomainError as e:
        raise ValidationError(f"{origin}: invalid grid row", [f"line 1: {e}"])


def read_functional_csv(path: Path) -> tuple[Grid, NDArray[np.float64]]:
    """
    Returns:
        grid (Grid): the grid read from the first row.
        rows (NDArray): n x grid.size observations.
    """
    values = read_numeric_csv(path)
    if values.shape[0] < 2:
        raise ValidationError(f"{path}: expected a grid row and at least one observation")
    grid = _grid_from_row(values[0], str(path))
    return grid, values[1:]


def read_sample(
    path: Path | None = None,
    scalars_path: Path | None = None,
) -> Sample:
    """
    Read a sample from a functional CSV and/or a scalar CSV, or from a single
    JSON document when `path` ends with `.json`.

    Raises:
        ValidationError: malformed files, or functional and scalar files with
        different numbers of observations.
    """
    if path is not None and path.suffix.lower() == ".json":
        return read_sample_json(path)
    if path is None and scalars_path is None:
        raise ValidationError("no input file provided")

    grids = ()
    blocks = []
    counts = {}
    if path is not None:
        grid, rows = read_functional_csv(path)
        grids = (grid,)
        blocks.append(rows)
        counts[str(path)] = rows.shape[0]
    if scalars_path is not None:
        scalars = read_numeric_csv(scalars_path)
        blocks.append(scalars)
        counts[str(scalars_path)] = scalars.shape[0]
    if len(set(counts.values())) > 1:
        raise ValidationError(
            "functional and scalar files disagree on the number of observations",
            [f"{p}: {c} observations" for p, c in counts.items()],
        )
    scalar_dim = blocks[-1].shape[1] if scalars_path is not None else 0
    layout = Layout(grids=grids, scalar_dim=scalar_dim)
    sample = Sample(layout=layout, values=np.hstack(blocks))
    logger.info(f"read a sample of {sample.n} observations ({layout.describe()})")
    return sample


def read_sample_json(path: Path) -> Sample:
    """
    Read the JSON mirror `{"grid": [...], "rows": [[...]], "scalars": [[...]]}`.
    """
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: malformed JSON", [f"line {e.lineno}: {e.msg}"])
    except OSError as e:
        raise ValidationError(f"{path}: cannot be read ({e.strerror})")
    if not isinstance(document, dict):
        raise ValidationError(f"{path}: expected a JSON object")

    problems = []
    unknown = set(document) - {"grid", "rows", "scalars"}
    if unknown:
        problems.append(f"unknown fields: {sorted(unknown)}")
    if "grid" in document and "rows" not in document:
        problems.append("field 'grid' requires field 'rows'")
    if "rows" in document and "grid" not in document:
        problems.append("field 'rows' requires field 'grid'")
    if not any(k in document for k in ("rows", "scalars")):
        problems.append("expected at least one of 'rows' or 'scalars'")
    if problems:
        raise ValidationError(f"{path}: invalid document", problems)

    grids = ()
    blocks = []
    if "grid" in document:
        grid = _grid_from_json(document["grid"], path)
        grids = (grid,)
        blocks.append(_matrix_from_json(document["rows"], "rows", grid.size, path))
    scalar_dim = 0
    if "scalars" in document:
        scalars = _matrix_from_json(document["scalars"], "scalars", None, path)
        scalar_dim = scalars.shape[1]
        blocks.append(scalars)
    counts = {b.shape[0] for b in blocks}
    if len(counts) > 1:
        raise ValidationError(
            f"{path}: 'rows' and 'scalars' disagree on the number of observations",
            [f"rows: {blocks[0].shape[0]}", f"scalars: {blocks[1].shape[0]}"],
        )
    return Sample(layout=Layout(grids=grids, scalar_dim=scalar_dim), values=np.hstack(blocks))


def _grid_from_json(raw, path: Path) -> Grid:
    try:
        points = np.asarray(raw, dtype=np.float64)
        return Grid(points)
    except (TypeError, ValueError, DomainError) as e:
        raise ValidationError(f"{path}: invalid field 'grid'", [str(e)])


def _matrix_from_json(raw, name: str, width: int | None, path: Path) -> NDArray[np.float64]:
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{path}: field '{name}' must be a non-empty list of rows")
    width = width if width is not None else (len(raw[0]) if isinstance(raw[0], list) else -1)
    problems = []
    matrix = np.full((len(raw), max(width, 0)), np.nan)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != width:
            problems.append(f"{name}[{i}]: expected a list of {width} numbers")
            continue
        for j, cell in enumerate(row):
            if isinstance(cell, bool) or not isinstance(cell, (int, float)) or not np.isfinite(cell):
                problems.append(f"{name}[{i}][{j}]: not a finite number {cell!r}")
            else:
                matrix[i, j] = float(cell)
    if problems:
        raise ValidationError(f"{path}: invalid field '{name}'", problems)
    return matrix


def write_sample(
    sample: Sample,
    path: Path | None = None,
    scalars_path: Path | None = None,
) -> None:
    """
    Write a sample in the CSV layout (functional part to `path`, scalar part
    to `scalars_path`) or as a JSON document when `path` ends with `.json`.

    Floats are written with their shortest round-trip representation so that
    reading the files back reproduces the values exactly.
    """
    layout = sample.layout
    if len(layout.grids) > 1:
        raise ValidationError(
            "the CSV/JSON layouts hold at most one functional component; "
            f"got {len(layout.grids)}"
        )
    functional, scalars = layout.split(sample.values)

    if path is not None and path.suffix.lower() == ".json":
        document = {}
        if layout.grids:
            document["grid"] = layout.grids[0].points.tolist()
            document["rows"] = functional[0].tolist()
        if layout.scalar_dim:
            document["scalars"] = scalars.tolist()
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(document, f)
        return

    if layout.grids:
        if path is None:
            raise ValidationError("a functional sample needs a path for its CSV")
        rows = np.vstack([layout.grids[0].points, functional[0]])
        _write_numeric_csv(rows, path)
    if layout.scalar_dim:
        if scalars_path is None:
            raise ValidationError("a sample with a scalar part needs a scalars path")
        _write_numeric_csv(scalars, scalars_path)


def _write_numeric_csv(matrix: NDArray[np.float64], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(repr(float(v)) for v in row) for row in matrix]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
