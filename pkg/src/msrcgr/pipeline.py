"""Feature-set assembly and the generate -> featurize -> train -> evaluate chain."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .classify import (
    EmbeddingTable,
    FeatureBlock,
    Metrics,
    Vocabulary,
    evaluate,
    fit_classifier,
    fuse,
    random_embeddings,
    trimer_features,
)
from .dataset import generate_dataset, stratified_split
from .errors import MsrcgrError
from .features import cgr_feature_matrix, feature_names

log = logging.getLogger(__name__)

FEATURE_SETS = ("kmer", "cgr", "embed", "embed+cgr", "kmer+cgr")


def featurize(records, feature_set: str, *, vocab: Vocabulary | None = None,
              embeddings: EmbeddingTable | None = None, exact: bool = True
              ) -> tuple[FeatureBlock, Vocabulary | None]:
    """Build the feature block for ``feature_set``.

    Returns the vocabulary used by the tri-mer block (None when the set has
    no tri-mer part) so the caller can reuse it on test rows.
    """
    if feature_set not in FEATURE_SETS:
        raise MsrcgrError(f"unknown feature set {feature_set!r}; choose from {FEATURE_SETS}")
    ids = [r.id for r in records]
    blocks = []
    for part in feature_set.split("+"):
        if part == "kmer":
            X, vocab = trimer_features(records, vocab)
            blocks.append(FeatureBlock(ids, X, [f"kmer_{t}" for t in vocab.tokens]))
        elif part == "cgr":
            blocks.append(FeatureBlock(ids, cgr_feature_matrix(records, exact=exact), feature_names()))
        elif part == "embed":
            if embeddings is None:
                raise MsrcgrError(f"feature set {feature_set!r} needs an embedding file")
            blocks.append(embeddings.block(ids))
    return fuse(blocks), (vocab if "kmer" in feature_set else None)


@dataclass
class SetResult:
    feature_set: str
    width: int
    metrics: Metrics
    iterations: int
    final_loss: float
    seconds: float

    def to_dict(self) -> dict:
        return {
            "set": self.feature_set,
            "width": self.width,
            "iterations": self.iterations,
            "final_loss": self.final_loss,
            "seconds": round(self.seconds, 3),
            **self.metrics.to_dict(),
        }


@dataclass
class ReproResult:
    seed: int
    per_class: int
    n_train: int
    n_test: int
    results: dict[str, SetResult] = field(default_factory=dict)

    def accuracy(self, feature_set: str) -> float:
        return self.results[feature_set].metrics.accuracy


def run_repro(seed: int = 42, per_class: int = 1000, sets=("kmer", "cgr", "kmer+cgr", "embed+cgr"),
              lam: float = 1.0, max_iter: int = 500, embeddings: EmbeddingTable | None = None,
              embed_dim: int = 320, embed_seed: int = 0, exact: bool = True) -> ReproResult:
    """In-memory benchmark run; random embeddings stand in when none are given."""
    records = generate_dataset(seed, per_class)
    split = stratified_split(records, 0.8, seed)
    if embeddings is None and any("embed" in s for s in sets):
        embeddings = random_embeddings([r.id for r in records], embed_dim, embed_seed)
    y_train = [r.label for r in split.train]
    y_test = [r.label for r in split.test]
    out = ReproResult(seed, per_class, len(split.train), len(split.test))
    cache: dict[str, tuple[FeatureBlock, FeatureBlock]] = {}

    def blocks(part):
        if part not in cache:
            tr, vocab = featurize(split.train, part, embeddings=embeddings, exact=exact)
            te, _ = featurize(split.test, part, vocab=vocab, embeddings=embeddings, exact=exact)
            cache[part] = (tr, te)
        return cache[part]

    for fs in sets:
        t0 = time.perf_counter()
        parts = [blocks(p) for p in fs.split("+")]
        train = fuse([p[0] for p in parts])
        test = fuse([p[1] for p in parts])
        model = fit_classifier(train.X, y_train, lam, max_iter=max_iter)
        metrics = evaluate(model, test.X, y_test)
        res = SetResult(fs, train.width, metrics, model.iterations, model.final_loss,
                        time.perf_counter() - t0)
        log.info("%s: width=%d acc=%.4f", fs, res.width, metrics.accuracy)
        out.results[fs] = res
    return out


def exact_vs_float_gap(records) -> float:
    """Largest absolute difference between exact and fast CGR features."""
    a = cgr_feature_matrix(records, exact=True)
    b = cgr_feature_matrix(records, exact=False)
    return float(np.abs(a - b).max()) if a.size else 0.0
