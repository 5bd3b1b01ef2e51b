"""Query scoring: word partition, the multiplicative detector score and its
stemming- and knowledge-graph-extended variants.

All three scores run through one log-space product so that the reduction
chain (graph score == stem score when no graph-detectable word exists, etc.)
holds exactly, and 50-factor products of tiny probabilities still rank
correctly. Factors are clamped below at ``clamp_epsilon`` before taking logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from . import text
from .errors import NotDetectableError
from .knowledge import CORPUS_COOCCURRENCE, GRAPH, RelatednessSource

MIN = "min"
MAX = "max"
MEAN_ARITHMETIC = "mean_arithmetic"
MEAN_GEOMETRIC = "mean_geometric"
AGGREGATORS = (MIN, MAX, MEAN_ARITHMETIC, MEAN_GEOMETRIC)

CORPUS = "corpus"
CONSTANT_ONE = "constant_one"
GRAPH_WEIGHT = "graph_weight"
ESTIMATORS = (CORPUS, CONSTANT_ONE, GRAPH_WEIGHT)


@dataclass(frozen=True)
class ScoreConfig:
    """Scoring knobs; defaults mirror the best-performing configuration."""

    aggregator: str = MAX
    relatedness: str = GRAPH
    conditional_estimator: str = CORPUS
    min_weight: float = 1.0
    noun_only: bool = False
    stopword_filter: bool = True
    clamp_epsilon: float = 1e-12

    def __post_init__(self):
        if self.aggregator not in AGGREGATORS:
            raise ValueError(f"unknown aggregator {self.aggregator!r}")
        if self.relatedness not in (GRAPH, CORPUS_COOCCURRENCE):
            raise ValueError(f"unknown relatedness {self.relatedness!r}")
        if self.conditional_estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.conditional_estimator!r}")
        if not 0.0 < self.clamp_epsilon < 1.0:
            raise ValueError("clamp_epsilon must lie in (0, 1)")
        if self.min_weight < 0:
            raise ValueError("min_weight must be non-negative")


@dataclass(frozen=True)
class WordPartition:
    """Disjoint split of a query's words by how they can be scored."""

    detectable: frozenset[str]
    stem_detectable: frozenset[str]
    cn_detectable: frozenset[str]
    undetected: frozenset[str]


def log_product(factors, eps: float) -> float:
    """Sum of logs with each factor clamped below at ``eps``; 0.0 for no factors."""
    return sum(math.log(max(f, eps)) for f in factors)


def partition_query(tokens, bank, relatedness: RelatednessSource,
                    config: ScoreConfig, word_classes=None) -> WordPartition:
    """Assign each query word to its first matching tier.

    Order: detector word, stem-detectable, graph/corpus-detectable, undetected.
    The stopword and noun-only filters gate only the third tier.
    """
    if config.noun_only and word_classes is None:
        raise ValueError("noun_only filtering needs a word-class map")
    detectable, stem_det, cn_det, undetected = set(), set(), set(), set()
    for token in tokens:
        word = token.surface
        if bank.is_detectable(word):
            detectable.add(word)
        elif bank.st_det(word):
            stem_det.add(word)
        elif _passes_cn_gate(word, relatedness, bank, config, word_classes):
            cn_det.add(word)
        else:
            undetected.add(word)
    return WordPartition(
        detectable=frozenset(detectable),
        stem_detectable=frozenset(stem_det),
        cn_detectable=frozenset(cn_det),
        undetected=frozenset(undetected),
    )


def _passes_cn_gate(word, relatedness, bank, config, word_classes) -> bool:
    if config.stopword_filter and word in text.STOPWORDS:
        return False
    if config.noun_only and word_classes.get(word) != text.NOUN:
        return False
    return bool(relatedness.related_detectable(word, bank))


def pair_estimate(w: str, related: str, image: str, bank, cooccur,
                  config: ScoreConfig, graph=None) -> float:
    """Estimate of w's presence through one related detectable word.

    Total-probability form: P(w|rel) * q + P(w|not rel) * (1 - q), where q is
    the stem-max detector estimate for the related word. The constant-one
    estimator collapses this to q; the graph-weight estimator scales q by the
    edge confidence normalized to the strongest retained edge.
    """
    q = bank.stem_max_estimate(related, image)
    estimator = config.conditional_estimator
    if estimator == CORPUS:
        if cooccur is None:
            raise ValueError("corpus estimator needs a co-occurrence model")
        return cooccur.cond_prob(w, related) * q \
            + cooccur.cond_prob_neg(w, related) * (1.0 - q)
    if estimator == CONSTANT_ONE:
        return q
    if graph is None:
        raise ValueError("graph_weight estimator needs a knowledge graph")
    return min(graph.edge_weight(w, related) / graph.max_weight, 1.0) * q


def aggregate_estimate(w: str, image: str, bank, relatedness: RelatednessSource,
                       cooccur, config: ScoreConfig) -> float:
    """Aggregate pair estimates over all related detectable words."""
    related = sorted(relatedness.related_detectable(w, bank))
    if not related:
        raise NotDetectableError(f"word {w!r} has no related detectable concept")
    estimates = [
        pair_estimate(w, r, image, bank, cooccur, config, graph=relatedness.graph)
        for r in related
    ]
    agg = config.aggregator
    if agg == MIN:
        return min(estimates)
    if agg == MAX:
        return max(estimates)
    if agg == MEAN_ARITHMETIC:
        return sum(estimates) / len(estimates)
    return math.prod(estimates) ** (1.0 / len(estimates))


def _mil_factors(partition, image, bank):
    return [bank.detector_score(image, w) for w in sorted(partition.detectable)]

def _stem_factors(partition, image, bank):
    return [bank.stem_max_estimate(w, image) for w in sorted(partition.stem_detectable)]

def _cn_factors(partition, image, bank, relatedness, cooccur, config):
    return [
        aggregate_estimate(w, image, bank, relatedness, cooccur, config)
        for w in sorted(partition.cn_detectable)
    ]


def mil_log_score(tokens, image, bank, config=None) -> float:
    config = config or ScoreConfig()
    detectable = frozenset(t.surface for t in tokens if bank.is_detectable(t.surface))
    factors = [bank.detector_score(image, w) for w in sorted(detectable)]
    return log_product(factors, config.clamp_epsilon)


def mil_score(tokens, image, bank, config=None) -> float:
    """Product of detector scores over the query's vocabulary words; 1 if none."""
    return math.exp(mil_log_score(tokens, image, bank, config))


def milstem_log_score(tokens, image, bank, config=None) -> float:
    config = config or ScoreConfig()
    partition = _detector_only_partition(tokens, bank)
    factors = _mil_factors(partition, image, bank) + _stem_factors(partition, image, bank)
    return log_product(factors, config.clamp_epsilon)


def milstem_score(tokens, image, bank, config=None) -> float:
    """Detector product extended with stem-max estimates for stem-detectable words."""
    return math.exp(milstem_log_score(tokens, image, bank, config))


def cn_log_score(tokens, image, bank, relatedness, cooccur,
                 config: ScoreConfig, word_classes=None) -> float:
    partition = partition_query(tokens, bank, relatedness, config, word_classes)
    factors = (
        _mil_factors(partition, image, bank)
        + _stem_factors(partition, image, bank)
        + _cn_factors(partition, image, bank, relatedness, cooccur, config)
    )
    return log_product(factors, config.clamp_epsilon)


def cn_score(tokens, image, bank, relatedness, cooccur,
             config: ScoreConfig, word_classes=None) -> float:
    """Stem-extended score further extended with aggregated related-word estimates."""
    return math.exp(cn_log_score(tokens, image, bank, relatedness, cooccur,
                                 config, word_classes))


def _detector_only_partition(tokens, bank) -> WordPartition:
    detectable, stem_det, rest = set(), set(), set()
    for token in tokens:
        if bank.is_detectable(token.surface):
            detectable.add(token.surface)
        elif bank.st_det(token.surface):
            stem_det.add(token.surface)
        else:
            rest.add(token.surface)
    return WordPartition(
        detectable=frozenset(detectable),
        stem_detectable=frozenset(stem_det),
        cn_detectable=frozenset(),
        undetected=frozenset(rest),
    )


class Scorer:
    """Bundles the loaded sources with a config; all inputs stay immutable."""

    def __init__(self, bank, graph=None, cooccur=None, word_classes=None,
                 config: ScoreConfig | None = None):
        self.bank = bank
        self.graph = graph
        self.cooccur = cooccur
        self.word_classes = word_classes
        self.config = config or ScoreConfig()
        if self.config.relatedness == GRAPH:
            if graph is None:
                raise ValueError("graph relatedness needs a knowledge graph")
            self.relatedness = RelatednessSource(variant=GRAPH, graph=graph,
                                                 corpus=cooccur)
        else:
            if cooccur is None:
                raise ValueError("corpus relatedness needs a co-occurrence model")
            self.relatedness = RelatednessSource(variant=CORPUS_COOCCURRENCE,
                                                 graph=graph, corpus=cooccur)

    def with_config(self, **overrides) -> "Scorer":
        return Scorer(self.bank, self.graph, self.cooccur, self.word_classes,
                      replace(self.config, **overrides))

    def partition(self, tokens) -> WordPartition:
        return partition_query(tokens, self.bank, self.relatedness, self.config,
                               self.word_classes)

    def mil(self, tokens, image) -> float:
        return mil_score(tokens, image, self.bank, self.config)

    def milstem(self, tokens, image) -> float:
        return milstem_score(tokens, image, self.bank, self.config)

    def cn(self, tokens, image) -> float:
        return cn_score(tokens, image, self.bank, self.relatedness, self.cooccur,
                        self.config, self.word_classes)

    def mil_log(self, tokens, image) -> float:
        return mil_log_score(tokens, image, self.bank, self.config)

    def milstem_log(self, tokens, image) -> float:
        return milstem_log_score(tokens, image, self.bank, self.config)

    def cn_log(self, tokens, image) -> float:
        return cn_log_score(tokens, image, self.bank, self.relatedness, self.cooccur,
                            self.config, self.word_classes)
