"""Scientific ML benchmark registry: rubric scoring, faceted queries and
power-profile workload clustering (C++ core)."""

from ._core import (  # noqa: F401
    ApiService,
    OntologyError,
    ParseError,
    Registry,
    ValidationError,
    cluster,
    cosine_distance,
    facet_counts,
    featurize,
    featurize_dir,
    heatmap,
    query,
    report_markdown,
    score,
)

__all__ = [
    "ApiService",
    "OntologyError",
    "ParseError",
    "Registry",
    "ValidationError",
    "cluster",
    "cosine_distance",
    "facet_counts",
    "featurize",
    "featurize_dir",
    "heatmap",
    "query",
    "report_markdown",
    "score",
]
