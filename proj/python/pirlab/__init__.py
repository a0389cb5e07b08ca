"""Linear storage codes and private information retrieval."""

from ._core import (
    LinearCode,
    Plan,
    PirlabError,
    build_plan,
    corpus_names,
    golden_schedule,
    mds_pir_capacity,
    rate_asymmetric_A,
    rate_symmetric,
    rate_table_csv,
)

__all__ = [
    "LinearCode",
    "Plan",
    "PirlabError",
    "build_plan",
    "corpus_names",
    "golden_schedule",
    "mds_pir_capacity",
    "rate_asymmetric_A",
    "rate_symmetric",
    "rate_table_csv",
]
