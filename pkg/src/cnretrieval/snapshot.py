"""Versioned binary snapshot of the ingested sources.

The snapshot stores the parsed raw data (vocabulary, score rows, relations,
tag sets) rather than the built objects, so loading rebuilds indexes under
the active configuration. All containers are canonicalized (sorted) before
pickling, which makes re-ingesting identical inputs byte-identical.
"""

from __future__ import annotations

import hashlib
import pickle

from .cooccur import CooccurrenceModel
from .detectors import DetectorBank
from .errors import SnapshotError
from .knowledge import KnowledgeGraph, Relation
from .text import WordClassMap

FORMAT_VERSION = 1


def file_checksum(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def save(path, bank: DetectorBank, relations, corpus: CooccurrenceModel,
         word_classes: WordClassMap | None = None,
         checksums: dict[str, str] | None = None) -> None:
    """Persist parsed sources; ``relations`` are the unfiltered graph edges."""
    payload = {
        "format_version": FORMAT_VERSION,
        "checksums": dict(sorted((checksums or {}).items())),
        "vocab": list(bank.vocab),
        "scores": {
            image: dict(sorted(bank.scores[image].items()))
            for image in sorted(bank.scores)
        },
        "relations": [
            (r.rel_type, r.start, r.end, r.weight)
            for r in sorted(relations, key=lambda r: (r.rel_type, r.start, r.end, r.weight))
        ],
        "corpus": {
            image: sorted(corpus.tag_sets[image])
            for image in sorted(corpus.tag_sets)
        },
        "word_classes": dict(sorted(word_classes.entries.items()))
        if word_classes is not None else None,
    }
    with open(path, "wb") as fh:
        pickle.dump(payload, fh, protocol=4)


def load(path, min_weight: float = 1.0, allowed_rel_types=None):
    """Rebuild (bank, graph, corpus, word_classes) from a snapshot file.

    Graph filters are applied at load time so one snapshot serves any config.
    """
    try:
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
    except (pickle.UnpicklingError, EOFError, ValueError) as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}")
    if not isinstance(payload, dict) or "format_version" not in payload:
        raise SnapshotError(f"{path} is not a snapshot file")
    version = payload["format_version"]
    if version != FORMAT_VERSION:
        raise SnapshotError(
            f"snapshot format version {version} unsupported (expected {FORMAT_VERSION})"
        )
    bank = DetectorBank.build(payload["vocab"], payload["scores"])
    relations = [Relation(*fields) for fields in payload["relations"]]
    graph = KnowledgeGraph.from_relations(relations, min_weight=min_weight,
                                          allowed_rel_types=allowed_rel_types)
    corpus = CooccurrenceModel.build(payload["corpus"].items())
    word_classes = None
    if payload.get("word_classes") is not None:
        word_classes = WordClassMap(entries=payload["word_classes"])
    return bank, graph, corpus, word_classes
