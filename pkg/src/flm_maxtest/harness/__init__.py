from flm_maxtest.harness.config import StudyConfig, load_study_config, validate_study_config
from flm_maxtest.harness.study import (
    PowerRow,
    PowerTable,
    read_results,
    run_study,
    write_results,
)

__all__ = [
    "PowerRow",
    "PowerTable",
    "StudyConfig",
    "load_study_config",
    "read_results",
    "run_study",
    "validate_study_config",
    "write_results",
]
