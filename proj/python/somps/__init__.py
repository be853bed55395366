"""SOMPS-Net fake health news detection: Python bindings over the C++ core."""

from ._core import (
    ArgumentError,
    Corpus,
    EmbeddingTable,
    Error,
    ParseError,
    SplitError,
    StateError,
    TrainingError,
    ValidationError,
    __version__,
    compute_metrics,
    config_echo,
    config_keys,
    connectivity_score,
    filter_eligible,
    generate_synthetic,
    load_corpus,
    normalize_adjacency,
    read_corpus,
    run_experiment,
    stratified_split,
    tokenize,
)

__all__ = [
    "ArgumentError",
    "Corpus",
    "EmbeddingTable",
    "Error",
    "ParseError",
    "SplitError",
    "StateError",
    "TrainingError",
    "ValidationError",
    "__version__",
    "compute_metrics",
    "config_echo",
    "config_keys",
    "connectivity_score",
    "filter_eligible",
    "generate_synthetic",
    "load_corpus",
    "normalize_adjacency",
    "read_corpus",
    "run_experiment",
    "stratified_split",
    "tokenize",
]
