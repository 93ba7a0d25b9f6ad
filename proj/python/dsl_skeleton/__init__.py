"""Active clustering over a nearest-neighbor data skeleton."""

from ._core import (
    Dataset,
    DslError,
    Metric,
    Session,
    Skeleton,
    adjusted_rand_index,
    auic,
    ds_init,
    erroneous_edge_rate,
    generate_blobs,
    load_csv,
    query_upper_bound,
)

__all__ = [
    "Dataset",
    "DslError",
    "Metric",
    "Session",
    "Skeleton",
    "adjusted_rand_index",
    "auic",
    "ds_init",
    "erroneous_edge_rate",
    "generate_blobs",
    "load_csv",
    "query_upper_bound",
]
