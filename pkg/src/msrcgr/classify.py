"""Tri-mer counts, embedding ingestion, feature fusion and a softmax classifier.

The classifier is multinomial logistic regression with an L2 penalty on the
weights, trained by deterministic full-batch gradient descent with an Armijo
backtracking line search.
"""
from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AlignmentError,
    DegenerateLabelsError,
    DimensionError,
    DivergenceError,
    EmptyEmbeddingError,
    MsrcgrError,
    ParseError,
)
from .features import NormStats

TRIMER = 3


# --- tri-mer counts ------------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump({"k": TRIMER, "tokens": list(self.tokens)}, fh)

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path) as fh:
            return cls(tuple(json.load(fh)["tokens"]))


def _windows(s: str, k: int = TRIMER):
    return (s[i : i + k] for i in range(len(s) - k + 1))


def build_vocabulary(sequences: Sequence[str]) -> Vocabulary:
    seen = set()
    for s in sequences:
        seen.update(_windows(s.upper()))
    return Vocabulary(tuple(sorted(seen)))


def trimer_features(records, vocab: Vocabulary | None = None) -> tuple[np.ndarray, Vocabulary]:
    """Raw overlapping tri-mer counts, one row per record.

    Without ``vocab`` the vocabulary is built from ``records`` (train time);
    with it, unseen tri-mers are dropped (test time).
    """
    seqs = [r.residues.upper() if hasattr(r, "residues") else str(r).upper() for r in records]
    if vocab is None:
        vocab = build_vocabulary(seqs)
    X = np.zeros((len(seqs), len(vocab)), dtype=np.float64)
    index = vocab.index
    for row, s in enumerate(seqs):
        if len(s) < TRIMER:
            warnings.warn(f"record {row} is shorter than {TRIMER} symbols; zero row")
            continue
        for w in _windows(s):
            j = index.get(w)
            if j is not None:
                X[row, j] += 1
    return X, vocab


# --- embeddings ----------------------------------------------------------

def mean_pool(per_residue) -> np.ndarray:
    H = np.atleast_2d(np.asarray(per_residue, dtype=np.float64))
    if H.shape[0] == 0 or H.size == 0:
        raise EmptyEmbeddingError("cannot pool an embedding with zero rows")
    return H.mean(axis=0)


@dataclass
class EmbeddingTable:
    dim: int
    rows: dict[str, np.ndarray]

    def block(self, ids: Sequence[str]) -> "FeatureBlock":
        missing = next((i for i in ids if i not in self.rows), None)
        if missing is not None:
            raise AlignmentError(f"no embedding for record id {missing!r}", record_id=missing)
        X = np.vstack([self.rows[i] for i in ids]) if ids else np.zeros((0, self.dim))
        return FeatureBlock(list(ids), X, [f"e{j + 1}" for j in range(self.dim)])


def read_embeddings(path) -> EmbeddingTable:
    """Load pooled (``id,e1..ed``) or per-residue (``id,t,e1..ed``) CSV embeddings."""
    per_id: dict[str, list[list[float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(reader, None)
        if not header or header[0] != "id":
            raise ParseError(f"{path}: embedding CSV must start with an 'id' column", 1)
        per_residue = len(header) > 1 and header[1] == "t"
        first = 2 if per_residue else 1
        dim = len(header) - first
        if dim < 1:
            raise ParseError(f"{path}: no embedding columns", 1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
            try:
                vec = [float(v) for v in row[first:]]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            bucket = per_id.setdefault(row[0], [])
            if bucket and not per_residue:
                raise ParseError(f"duplicate id {row[0]!r}", lineno)
            bucket.append(vec)
    return EmbeddingTable(dim, {rid: mean_pool(rows) for rid, rows in per_id.items()})


def write_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", *(f"e{j + 1}" for j in range(table.dim))])
        for rid, vec in table.rows.items():
            w.writerow([rid, *(f"{v:.12g}" for v in vec)])


def random_embeddings(ids: Sequence[str], dim: int = 320, seed: int = 0) -> EmbeddingTable:
    """Signal-free stand-in for a language-model embedding file.

    Row values are i.i.d. standard normal from ``PCG64(seed)`` drawn in
    ``ids`` order.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    M = rng.standard_normal((len(ids), dim))
    return EmbeddingTable(dim, {rid: M[i] for i, rid in enumerate(ids)})


# --- fusion --------------------------------------------------------------

@dataclass
class FeatureBlock:
    ids: list[str]
    X: np.ndarray
    columns: list[str]

    @property
    def width(self) -> int:
        return self.X.shape[1]


def fuse(blocks: Sequence[FeatureBlock]) -> FeatureBlock:
    """Concatenate blocks column-wise; rows must align by id."""
    if not blocks:
        raise DimensionError("nothing to fuse")
    ref = blocks[0].ids
    for b in blocks[1:]:
        for pos in range(max(len(ref), len(b.ids))):
            want = ref[pos] if pos < len(ref) else None
            got = b.ids[pos] if pos < len(b.ids) else None
            if want != got:
                rid = want if want is not None else got
                raise AlignmentError(
                    f"blocks disagree at row {pos}: expected id {want!r}, got {got!r}",
                    record_id=rid,
                )
    if len(blocks) == 1:
        return blocks[0]
    return FeatureBlock(list(ref), np.hstack([b.X for b in blocks]),
                        [c for b in blocks for c in b.columns])


# --- classifier ----------------------------------------------------------

def softmax(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


def _forward(W, b, X, Y, lam):
    n = X.shape[0]
    Z = X @ W.T + b
    Z -= Z.max(axis=1, keepdims=True)
    logP = Z - np.log(np.exp(Z).sum(axis=1, keepdims=True))
    loss = -(Y * logP).sum() / n + lam / (2 * n) * (W * W).sum()
    return float(loss), logP


def _backward(W, X, Y, lam, logP):
    n = X.shape[0]
    R = (np.exp(logP) - Y) / n
    return R.T @ X + (lam / n) * W, R.sum(axis=0)


def loss_and_grad(W, b, X, Y, lam):
    """Mean cross-entropy plus ``lam/(2N) * ||W||^2`` and its gradient.

    ``Y`` is one-hot (N x C); the bias is not penalised.
    """
    loss, logP = _forward(W, b, X, Y, lam)
    gW, gb = _backward(W, X, Y, lam, logP)
    return loss, gW, gb


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: np.ndarray
    classes: list[str]
    norm_stats: NormStats
    lam: float
    final_loss: float
    iterations: int
    converged: bool = False

    def decision(self, X_raw) -> np.ndarray:
        from .features import zscore_apply

        return zscore_apply(X_raw, self.norm_stats) @ self.weights.T + self.bias

    def predict_proba(self, X_raw) -> np.ndarray:
        return softmax(self.decision(X_raw))

    def predict(self, X_raw) -> list[str]:
        return [self.classes[i] for i in self.decision(X_raw).argmax(axis=1)]

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "lambda": self.lam,
            "norm_stats": self.norm_stats.to_dict(),
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "final_loss": self.final_loss,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogRegModel":
        return cls(np.asarray(d["weights"], dtype=float), np.asarray(d["bias"], dtype=float),
                   list(d["classes"]), NormStats.from_dict(d["norm_stats"]), float(d["lambda"]),
                   float(d["final_loss"]), int(d["iterations"]), bool(d.get("converged", False)))


def ordered_classes(y: Sequence[str]) -> list[str]:
    from .dataset import LABELS

    present = set(y)
    return [c for c in LABELS if c in present] + sorted(present - set(LABELS))


def train_logreg(X, y: Sequence[str], lam: float = 1.0, max_iter: int = 500, tol: float = 1e-6,
                 norm_stats: NormStats | None = None) -> LogRegModel:
    """Fit on already-standardised ``X``.

    ``norm_stats`` is stored on the model so raw rows can be scored later;
    it defaults to the identity transform.
    """
    X = np.asarray(X, dtype=np.float64)
    if len(y) == 0 or X.shape[0] == 0:
        raise DegenerateLabelsError("no training rows")
    if X.shape[0] != len(y):
        raise DimensionError(f"{X.shape[0]} rows but {len(y)} labels")
    classes = ordered_classes(y)
    if len(classes) < 2:
        raise DegenerateLabelsError(f"need at least two classes, got {classes}")
    lookup = {c: i for i, c in enumerate(classes)}
    Y = np.zeros((len(y), len(classes)))
    Y[np.arange(len(y)), [lookup[v] for v in y]] = 1.0

    W = np.zeros((len(classes), X.shape[1]))
    b = np.zeros(len(classes))
    loss, logP = _forward(W, b, X, Y, lam)
    gW, gb = _backward(W, X, Y, lam, logP)
    step = 1.0
    it = 0
    converged = False
    while it < max_iter:
        gnorm2 = float((gW * gW).sum() + (gb * gb).sum())
        if not np.isfinite(loss) or not np.isfinite(gnorm2):
            raise DivergenceError(f"non-finite loss at iteration {it}")
        if np.sqrt(gnorm2) < tol:
            converged = True
            break
        # Armijo backtracking, starting from twice the last accepted step
        step *= 2.0
        for _ in range(60):
            W_new, b_new = W - step * gW, b - step * gb
            new_loss, new_logP = _forward(W_new, b_new, X, Y, lam)
            if np.isfinite(new_loss) and new_loss <= loss - 1e-4 * step * gnorm2:
                break
            step *= 0.5
        else:
            break  # no decrease left at machine precision
        it += 1
        W, b, loss = W_new, b_new, new_loss
        gW, gb = _backward(W, X, Y, lam, new_logP)
    if not np.isfinite(loss):
        raise DivergenceError("non-finite final loss")
    stats = norm_stats if norm_stats is not None else NormStats.identity(X.shape[1])
    return LogRegModel(W, b, classes, stats, lam, loss, it, converged)


def fit_classifier(X_raw, y, lam: float = 1.0, **kw) -> LogRegModel:
    """z-score on these rows, then :func:`train_logreg`."""
    from .features import zscore_apply, zscore_fit

    if len(y) == 0:
        raise DegenerateLabelsError("no training rows")
    stats = zscore_fit(X_raw)
    return train_logreg(zscore_apply(X_raw, stats), y, lam, norm_stats=stats, **kw)


# --- metrics -------------------------------------------------------------

@dataclass
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: np.ndarray
    classes: list[str]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "classes": self.classes,
            "confusion": self.confusion.tolist(),
        }


def confusion_matrix(y_true, y_pred, classes: Sequence[str]) -> np.ndarray:
    lookup = {c: i for i, c in enumerate(classes)}
    C = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if t not in lookup:
            raise MsrcgrError(f"label {t!r} is not one of the model classes")
        C[lookup[t], lookup[p]] += 1
    return C


def metrics_from_confusion(C: np.ndarray, classes: Sequence[str]) -> Metrics:
    """Support-weighted precision/recall/F1; a never-predicted class has precision 0."""
    C = np.asarray(C)
    tp = np.diag(C).astype(float)
    support = C.sum(axis=1).astype(float)
    predicted = C.sum(axis=0).astype(float)
    total = support.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        prec = np.where(predicted > 0, tp / predicted, 0.0)
        rec = np.where(support > 0, tp / support, 0.0)
        f1 = np.where(prec + rec > 0, 2 * prec * rec / (prec + rec), 0.0)
    w = support / total if total else support
    return Metrics(
        accuracy=float(tp.sum() / total) if total else 0.0,
        precision=float((w * prec).sum()),
        recall=float((w * rec).sum()),
        f1=float((w * f1).sum()),
        confusion=C,
        classes=list(classes),
    )


def evaluate(model: LogRegModel, X_test, y_test: Sequence[str]) -> Metrics:
    """Score raw test rows; the model applies its stored normalisation."""
    X_test = np.asarray(X_test, dtype=np.float64)
    if X_test.ndim != 2 or X_test.shape[1] != model.weights.shape[1]:
        raise DimensionError(
            f"test width {X_test.shape[-1]} does not match model width {model.weights.shape[1]}"
        )
    pred = model.predict(X_test)
    return metrics_from_confusion(confusion_matrix(y_test, pred, model.classes), model.classes)
