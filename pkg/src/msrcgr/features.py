"""Per-scale trajectory descriptors, the 24-dim CGR vector, and z-scoring."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .alphabet import Base, corner_table
from .cgr import DEFAULT_SCALES, Trajectory, encode_scale, encode_scale_float
from .errors import DimensionError, EmptyTrajectoryError, SequenceTooShortError

DESCRIPTOR_FIELDS = ("fx", "fy", "n", "vx", "vy", "d")
STD_EPS = 1e-12


@dataclass(frozen=True)
class ScaleDescriptor:
    final_x: float
    final_y: float
    n_k: float
    var_x: float
    var_y: float
    mean_dist: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.final_x, self.final_y, self.n_k, self.var_x, self.var_y, self.mean_dist)


def feature_names(scales: Sequence[int] = DEFAULT_SCALES) -> list[str]:
    return [f"k{k}_{f}" for k in scales for f in DESCRIPTOR_FIELDS]


def _describe(xy: np.ndarray, final: tuple[float, float]) -> ScaleDescriptor:
    # population statistics over p_1..p_n_k; the origin is excluded
    n_k = xy.shape[0]
    var = xy.var(axis=0)
    mean_dist = float(np.hypot(xy[:, 0], xy[:, 1]).mean())
    return ScaleDescriptor(final[0], final[1], float(n_k), float(var[0]), float(var[1]), mean_dist)


def scale_descriptor(trajectory: Trajectory) -> ScaleDescriptor:
    """Six-number summary of one trajectory.

    Points are exact; each coordinate is converted to the nearest double
    before the statistics are taken.
    """
    if trajectory.n_k < 1:
        raise EmptyTrajectoryError("trajectory has no steps")
    xy = np.array([p.to_float() for p in trajectory.points[1:]], dtype=np.float64)
    return _describe(xy, trajectory.points[-1].to_float())


def scale_descriptor_float(points: Sequence[tuple[float, float]]) -> ScaleDescriptor:
    if not points:
        raise EmptyTrajectoryError("trajectory has no steps")
    xy = np.asarray(points, dtype=np.float64)
    return _describe(xy, points[-1])


def cgr_feature_vector(s: str, scales: Sequence[int] = DEFAULT_SCALES, *, base=Base.DNA,
                       exact: bool = True) -> np.ndarray:
    """Concatenated per-scale descriptors, ``6 * len(scales)`` values.

    ``exact=False`` runs the double-precision encoder instead of the rational
    one; results agree to ~1e-12. Corners for large alphabets (PROTEIN k=4)
    are generated lazily, so the size cap does not apply here.
    """
    if len(s) < max(scales):
        raise SequenceTooShortError(
            f"sequence of length {len(s)} is shorter than scale k={max(scales)}",
            scale=max(scales),
        )
    out = []
    for k in scales:
        corners = corner_table(base, k, allow_large=True)
        if exact:
            d = scale_descriptor(encode_scale(s, k, corners))
        else:
            d = scale_descriptor_float(encode_scale_float(s, k, corners))
        out.extend(d.as_tuple())
    return np.array(out, dtype=np.float64)


def cgr_feature_matrix(records, scales: Sequence[int] = DEFAULT_SCALES, *,
                       exact: bool = True) -> np.ndarray:
    rows = [cgr_feature_vector(r.residues, scales, base=r.kind, exact=exact) for r in records]
    return np.vstack(rows) if rows else np.zeros((0, 6 * len(scales)))


@dataclass(frozen=True)
class NormStats:
    mean: np.ndarray
    std: np.ndarray

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "NormStats":
        return cls(np.asarray(data["mean"], dtype=float), np.asarray(data["std"], dtype=float))

    @classmethod
    def identity(cls, width: int) -> "NormStats":
        return cls(np.zeros(width), np.ones(width))


def zscore_fit(X) -> NormStats:
    X = np.asarray(X, dtype=np.float64)
    return NormStats(X.mean(axis=0), X.std(axis=0))


def zscore_apply(X, stats: NormStats) -> np.ndarray:
    """Standardise columns with precomputed stats; near-constant columns become 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != stats.mean.shape[0]:
        raise DimensionError(
            f"feature width {X.shape[-1] if X.ndim else 0} does not match stats width "
            f"{stats.mean.shape[0]}"
        )
    live = stats.std >= STD_EPS
    scale = np.where(live, stats.std, 1.0)
    Z = (X - stats.mean) / scale
    Z[:, ~live] = 0.0
    return Z


def write_feature_csv(path, ids: Sequence[str], labels: Sequence[str], columns: Sequence[str],
                      X: np.ndarray, header_comment: str | None = None) -> None:
    """CSV ``id,label,<columns>`` with 12 significant digits."""
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        w = csv.writer(fh)
        w.writerow(["id", "label", *columns])
        for rid, lab, row in zip(ids, labels, X):
            w.writerow([rid, lab, *(f"{v:.12g}" for v in row)])


def read_feature_csv(path) -> tuple[list[str], list[str], list[str], np.ndarray]:
    """Returns ``(ids, labels, columns, X)``; leading ``#`` lines are skipped."""
    import pandas as pd

    skip = 0
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            skip += 1
    try:
        df = pd.read_csv(path, skiprows=skip, dtype={"id": str, "label": str})
    except pd.errors.EmptyDataError:
        return [], [], [], np.zeros((0, 0))
    if list(df.columns[:2]) != ["id", "label"]:
        raise DimensionError(f"{path}: feature CSV must start with id,label columns")
    X = df.iloc[:, 2:].to_numpy(dtype=np.float64)
    return df["id"].tolist(), df["label"].tolist(), list(df.columns[2:]), X

