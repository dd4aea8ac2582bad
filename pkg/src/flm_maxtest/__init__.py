"""
Bootstrap max-statistic hypothesis tests for functional linear models.
"""

__version__ = "0.1.0"
