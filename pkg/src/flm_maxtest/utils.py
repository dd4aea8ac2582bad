import json
import logging
import os
from pathlib import Path

import yaml

from flm_maxtest.constants import ENV_WORKERS

logger = logging.getLogger(__name__)


class IndentedDumper(yaml.Dumper):
    """Formatter for dumping yaml with indented sequences."""

    def increase_indent(self, flow=False, indentless=False):
        return super(IndentedDumper, self).increase_indent(flow, False)


def yaml_read(path: Path) -> dict:
    """Returns yaml content as a python dict."""
    with open(path, "r") as f:
        return yaml.safe_load(f)


def yaml_write(to: Path, data: dict, dumper=IndentedDumper) -> None:
    """Writes a `data` dictionnary to the provided `to` path."""
    with open(to, "w") as f:
        yaml.dump(
            data=data,
            stream=f,
            Dumper=dumper,
            default_flow_style=False,
            sort_keys=False,
        )


def read_structured(path: Path) -> dict:
    """
    Read a key-value document, JSON or YAML depending on the file suffix.

    Returns:
        content (dict): an empty dict for an empty document.
    """
    if path.suffix.lower() == ".json":
        with open(path, "r") as f:
            content = json.load(f)
    else:
        content = yaml_read(path)
    return content or {}


def default_workers() -> int:
    """
    Number of worker processes, read from the `FLM_MAXTEST_WORKERS`
    environment variable (defaults to 1).
    """
    value = os.getenv(ENV_WORKERS)
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        logger.warning(f"ignoring {ENV_WORKERS}={value!r}, not an integer")
        return 1
    return max(1, workers)
