"""Comparing aggregation functions and relatedness sources.

For a word scored through several related detectors, the per-neighbor
estimates can be combined by min, geometric mean, arithmetic mean or max;
the combined value is always ordered min <= geo <= arith <= max.
Relatedness itself can come from graph edges or from tag co-occurrence.

Run: python demos/02_aggregators_and_relatedness.py
"""

from cnretrieval import (
    CooccurrenceModel,
    DetectorBank,
    KnowledgeGraph,
    Relation,
    ScoreConfig,
    Scorer,
    tokenize,
)

bank = DetectorBank.build(
    ["doughnut", "bread", "plate", "coffee"],
    {
        "img_bakery": {"doughnut": 0.85, "bread": 0.7, "plate": 0.4},
        "img_cafe": {"coffee": 0.9, "plate": 0.6, "bread": 0.2},
        "img_field": {},
    },
)

graph = KnowledgeGraph.from_relations([
    Relation("IsA", "bagel", "doughnut", 1.5),
    Relation("RelatedTo", "bagel", "bread", 1.0),
], min_weight=1.0)

corpus = CooccurrenceModel.build([
    ("e1", ["bagel", "bread", "plate"]),
    ("e2", ["bagel", "doughnut"]),
    ("e3", ["coffee", "plate"]),
    ("e4", ["bread"]),
])

tokens = tokenize("a bagel")

print("graph relatedness ('bagel' via doughnut + bread detectors):")
print(f"{'image':<12}" + "".join(f"{a:>12}" for a in
                                 ("min", "geo-mean", "arith-mean", "max")))
for image in bank.images:
    row = []
    for agg in ("min", "mean_geometric", "mean_arithmetic", "max"):
        scorer = Scorer(bank, graph, corpus,
                        config=ScoreConfig(aggregator=agg))
        row.append(scorer.cn(tokens, image))
    print(f"{image:<12}" + "".join(f"{v:>12.4f}" for v in row))

print()
print("tag-co-occurrence relatedness (no graph edges needed):")
for image in bank.images:
    scorer = Scorer(bank, graph, corpus, config=ScoreConfig(
        aggregator="max", relatedness="corpus-cooccurrence"))
    print(f"{image:<12}{scorer.cn(tokens, image):>12.4f}")
