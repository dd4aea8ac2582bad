from flm_maxtest.maxtest.bootstrap import (
    BootstrapQuantiles,
    Decision,
    bootstrap_quantiles,
    decide,
    max_min_statistics,
    simultaneous_intervals,
)
from flm_maxtest.maxtest.scores import CrossScoreMatrix, Summary, cross_scores, summarize
from flm_maxtest.maxtest.engine import TestConfig, TestResult, run_test

__all__ = [
    "BootstrapQuantiles",
    "CrossScoreMatrix",
    "Decision",
    "Summary",
    "TestConfig",
    "TestResult",
    "bootstrap_quantiles",
    "cross_scores",
    "decide",
    "max_min_statistics",
    "run_test",
    "simultaneous_intervals",
    "summarize",
]
