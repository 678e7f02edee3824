"""Randomized low-rank matrix decompositions."""

from ._rlam import (
    __version__,
    expected_error_bound,
    gen_lowrank,
    gen_lowrank_plus_sparse,
    rcur,
    rid,
    rpca,
    rqb,
    rrpca,
    rsvd,
    svd,
)

__all__ = [
    "__version__",
    "expected_error_bound",
    "gen_lowrank",
    "gen_lowrank_plus_sparse",
    "rcur",
    "rid",
    "rpca",
    "rqb",
    "rrpca",
    "rsvd",
    "svd",
]
