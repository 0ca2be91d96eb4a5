"""Synthetic student-performance data generation and evaluation toolkit."""

from ._core import (
    Schema,
    Table,
    __version__,
    evaluate,
    generate,
    load_csv,
    run_bench,
    seed_dataset,
    write_csv,
)

__all__ = [
    "Schema",
    "Table",
    "__version__",
    "evaluate",
    "generate",
    "load_csv",
    "run_bench",
    "seed_dataset",
    "write_csv",
]
