"""Command-line surface: ingest, classify, score, eval.

Exit codes: 0 success, 1 usage error, 2 data/parse error. Config precedence
is CLI flags over config file over built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields as dataclass_fields

from . import evaluation, knowledge, scoring, snapshot, text
from .cooccur import CooccurrenceModel
from .detectors import DetectorBank
from .errors import EvaluationError, IngestError, SnapshotError
from .evaluation import EvalReport, compute_report, format_table, load_queries
from .scoring import ScoreConfig, Scorer
from .text import WordClassMap, tokenize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

#: scorer name -> (uses graph score, config overrides)
SCORERS = {
    "MIL": None,
    "MILSTEM": None,
    "ESP_MIN": {"relatedness": knowledge.CORPUS_COOCCURRENCE, "aggregator": scoring.MIN},
    "ESP_MEAN_G": {"relatedness": knowledge.CORPUS_COOCCURRENCE,
                   "aggregator": scoring.MEAN_GEOMETRIC},
    "ESP_MEAN_A": {"relatedness": knowledge.CORPUS_COOCCURRENCE,
                   "aggregator": scoring.MEAN_ARITHMETIC},
    "ESP_MAX": {"relatedness": knowledge.CORPUS_COOCCURRENCE, "aggregator": scoring.MAX},
    "CN_MIN": {"relatedness": knowledge.GRAPH, "aggregator": scoring.MIN},
    "CN_MEAN_G": {"relatedness": knowledge.GRAPH, "aggregator": scoring.MEAN_GEOMETRIC},
    "CN_MEAN_A": {"relatedness": knowledge.GRAPH, "aggregator": scoring.MEAN_ARITHMETIC},
    "CN_MAX": {"relatedness": knowledge.GRAPH, "aggregator": scoring.MAX},
    "CN_MAX_NN": {"relatedness": knowledge.GRAPH, "aggregator": scoring.MAX,
                  "noun_only": True},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cnretrieval",
                     description="Knowledge-augmented image retrieval scoring")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_config_flags(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--aggregator", choices=scoring.AGGREGATORS)
        p.add_argument("--relatedness",
                       choices=[knowledge.GRAPH, knowledge.CORPUS_COOCCURRENCE])
        p.add_argument("--estimator", choices=scoring.ESTIMATORS,
                       dest="conditional_estimator")
        p.add_argument("--min-weight", type=float, dest="min_weight")
        p.add_argument("--noun-only", action=argparse.BooleanOptionalAction,
                       default=None, dest="noun_only")
        p.add_argument("--stopwords", action=argparse.BooleanOptionalAction,
                       default=None, dest="stopword_filter")
        p.add_argument("--epsilon", type=float, dest="clamp_epsilon")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--output", choices=["json", "table"], default="table")

    p_ingest = sub.add_parser("ingest", help="parse sources into a binary snapshot")
    p_ingest.add_argument("--detectors", required=True)
    p_ingest.add_argument("--graph", required=True)
    p_ingest.add_argument("--corpus", required=True)
    p_ingest.add_argument("--word-classes", dest="word_classes")
    p_ingest.add_argument("--snapshot", required=True)

    p_classify = sub.add_parser("classify", help="show the word partition of a query")
    p_classify.add_argument("query")
    p_classify.add_argument("--snapshot", required=True)
    add_config_flags(p_classify)

    p_score = sub.add_parser("score", help="rank images for one query")
    p_score.add_argument("query")
    p_score.add_argument("--snapshot", required=True)
    p_score.add_argument("--top-k", type=int, default=10, dest="top_k")
    add_config_flags(p_score)

    p_eval = sub.add_parser("eval", help="batch evaluation over a query file")
    p_eval.add_argument("--snapshot", required=True)
    p_eval.add_argument("--queries", required=True)
    p_eval.add_argument("--scorers", required=True,
                        help="comma-separated list, e.g. MIL,MILSTEM,CN_MAX")
    add_config_flags(p_eval)

    return parser


def resolve_config(args) -> ScoreConfig:
    values = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            file_values = json.load(fh)
        known = {f.name for f in dataclass_fields(ScoreConfig)}
        unknown = set(file_values) - known
        if unknown:
            raise IngestError(f"unknown config keys: {sorted(unknown)}",
                              path=args.config)
        values.update(file_values)
    for field in dataclass_fields(ScoreConfig):
        flag_value = getattr(args, field.name, None)
        if flag_value is not None:
            values[field.name] = flag_value
    return ScoreConfig(**values)


def _load_scorer(args) -> Scorer:
    config = resolve_config(args)
    bank, graph, corpus, word_classes = snapshot.load(
        args.snapshot, min_weight=config.min_weight)
    return Scorer(bank, graph, corpus, word_classes, config)


def _score_fn(scorer: Scorer, name: str):
    """Query-level log-score function for a named scorer (logs rank identically)."""
    overrides = SCORERS[name]
    if name == "MIL":
        return lambda tokens, image: scorer.mil_log(tokens, image)
    if name == "MILSTEM":
        return lambda tokens, image: scorer.milstem_log(tokens, image)
    variant = scorer.with_config(**overrides)
    return lambda tokens, image: variant.cn_log(tokens, image)


def cmd_ingest(args) -> int:
    bank = DetectorBank.from_jsonl(args.detectors)
    relations = knowledge.parse_relations_csv(args.graph)
    corpus = CooccurrenceModel.from_jsonl(args.corpus)
    word_classes = WordClassMap.from_csv(args.word_classes) if args.word_classes else None
    checksums = {
        "detectors": snapshot.file_checksum(args.detectors),
        "graph": snapshot.file_checksum(args.graph),
        "corpus": snapshot.file_checksum(args.corpus),
    }
    if args.word_classes:
        checksums["word_classes"] = snapshot.file_checksum(args.word_classes)
    snapshot.save(args.snapshot, bank, relations, corpus, word_classes, checksums)
    print(f"snapshot written to {args.snapshot}")
    return EXIT_OK


def cmd_classify(args) -> int:
    scorer = _load_scorer(args)
    tokens = tokenize(args.query)
    partition = scorer.partition(tokens)
    listing = []
    for token in tokens:
        word = token.surface
        if word in partition.detectable:
            entry = {"word": word, "class": "detectable"}
        elif word in partition.stem_detectable:
            entry = {"word": word, "class": "stem-detectable",
                     "via": sorted(scorer.bank.st_det(word))}
        elif word in partition.cn_detectable:
            related = scorer.relatedness.related_detectable(word, scorer.bank)
            entry = {"word": word, "class": "cn-detectable",
                     "via": sorted(related)}
        else:
            entry = {"word": word, "class": "undetected"}
        listing.append(entry)
    if args.output == "json":
        print(json.dumps(listing, indent=2))
    else:
        for entry in listing:
            via = f"  via {', '.join(entry['via'])}" if "via" in entry else ""
            print(f"{entry['word']}: {entry['class']}{via}")
    return EXIT_OK


def cmd_score(args) -> int:
    if args.top_k < 1:
        raise UsageError("--top-k must be at least 1")
    scorer = _load_scorer(args)
    tokens = tokenize(args.query)
    ranking = evaluation.rank_images(
        scorer.bank.images, lambda img: scorer.cn_log(tokens, img))
    top = [(image, scorer.cn(tokens, image)) for image, _ in ranking[: args.top_k]]
    if args.output == "json":
        print(json.dumps([{"image": i, "score": s} for i, s in top], indent=2))
    else:
        for i, (image, score) in enumerate(top, start=1):
            print(f"{i:4d}  {image}  {score:.6g}")
    return EXIT_OK


def cmd_eval(args) -> int:
    names = [n for n in (s.strip() for s in args.scorers.split(",")) if n]
    if not names:
        raise UsageError("empty scorer list")
    unknown = [n for n in names if n not in SCORERS]
    if unknown:
        raise UsageError(f"unknown scorers: {', '.join(unknown)}")
    scorer = _load_scorer(args)
    queries = load_queries(args.queries)
    token_cache = {q.query_id: tokenize(q.text) for q in queries}
    reports: dict[str, EvalReport] = {}
    for name in names:
        fn = _score_fn(scorer, name)
        reports[name] = compute_report(
            queries,
            lambda query, image, fn=fn: fn(token_cache[query.query_id], image),
            scorer.bank.images,
            jobs=args.jobs,
        )
    if args.output == "json":
        print(json.dumps({n: r.to_dict() for n, r in reports.items()}, indent=2))
    else:
        print(format_table(reports))
    return EXIT_OK


class UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "classify": cmd_classify,
        "score": cmd_score,
        "eval": cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"cnretrieval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, SnapshotError, EvaluationError, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"cnretrieval: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
