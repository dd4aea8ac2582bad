from flm_maxtest.fpca.alignment import AlignmentReport, alignment_report
from flm_maxtest.fpca.eigen import (
    EigenSystem,
    OrthonormalBasis,
    empirical_eigensystem,
    fourier_system,
    project_scores,
    write_eigensystem,
)

__all__ = [
    "AlignmentReport",
    "EigenSystem",
    "OrthonormalBasis",
    "alignment_report",
    "empirical_eigensystem",
    "fourier_system",
    "project_scores",
    "write_eigensystem",
]
