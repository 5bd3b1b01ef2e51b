"""Knowledge-augmented sentence-to-image retrieval scoring and evaluation.

A fixed bank of visual word detectors is extended in two stages: stemming
maps query words onto existing detectors, and a commonsense concept graph
(or tag co-occurrence corpus) lets related detectors stand in for words that
have none. Rank-based evaluation (r@k, median/mean rank) sits on top.
"""

from .cooccur import CooccurrenceModel
from .detectors import DetectorBank
from .errors import (
    EvaluationError,
    IngestError,
    NotDetectableError,
    SnapshotError,
    UnknownImageError,
)
from .evaluation import (
    EvalReport,
    QueryRecord,
    compute_report,
    format_table,
    load_queries,
    rank_images,
    rank_of_ground_truth,
)
from .knowledge import (
    KnowledgeGraph,
    Relation,
    RelatednessSource,
    esp_related,
    parse_relations_csv,
)
from .scoring import (
    AGGREGATORS,
    ScoreConfig,
    Scorer,
    WordPartition,
    aggregate_estimate,
    cn_score,
    mil_score,
    milstem_score,
    pair_estimate,
    partition_query,
)
from .text import STOPWORDS, Token, WordClassMap, stem, stem_set, tokenize

__all__ = [
    "AGGREGATORS",
    "CooccurrenceModel",
    "DetectorBank",
    "EvalReport",
    "EvaluationError",
    "IngestError",
    "KnowledgeGraph",
    "NotDetectableError",
    "QueryRecord",
    "Relation",
    "RelatednessSource",
    "ScoreConfig",
    "Scorer",
    "SnapshotError",
    "STOPWORDS",
    "Token",
    "UnknownImageError",
    "WordClassMap",
    "WordPartition",
    "aggregate_estimate",
    "cn_score",
    "compute_report",
    "esp_related",
    "format_table",
    "load_queries",
    "mil_score",
    "milstem_score",
    "pair_estimate",
    "parse_relations_csv",
    "partition_query",
    "rank_images",
    "rank_of_ground_truth",
    "stem",
    "stem_set",
    "tokenize",
]

__version__ = "0.1.0"
