"""Python bindings for the culinary analytics core."""

from ._culinary import (
    CulinaryError,
    __version__,
    complexity_score,
    config_keys,
    entropy,
    gaussian_kl,
    gaussian_symkl,
    ingredient_similarity,
    js_divergence,
    kendall_tau,
    pearson,
    run,
    similarity_from_symkl,
    tfidf,
    write_synthetic_world,
)

__all__ = [
    "CulinaryError",
    "__version__",
    "complexity_score",
    "config_keys",
    "entropy",
    "gaussian_kl",
    "gaussian_symkl",
    "ingredient_similarity",
    "js_divergence",
    "kendall_tau",
    "pearson",
    "run",
    "similarity_from_symkl",
    "tfidf",
    "write_synthetic_world",
]
