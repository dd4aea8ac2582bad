from flm_maxtest.hilbert.io import read_sample, write_sample
from flm_maxtest.hilbert.space import (
    Grid,
    HilbertPoint,
    Layout,
    Sample,
    center,
    inner_product,
    norm,
)

__all__ = [
    "Grid",
    "HilbertPoint",
    "Layout",
    "Sample",
    "center",
    "inner_product",
    "norm",
    "read_sample",
    "write_sample",
]
