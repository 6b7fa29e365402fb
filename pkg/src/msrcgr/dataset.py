"""Seven-class synthetic benchmark, stratified split and FASTA I/O.

Random streams: every record draws from its own numpy ``PCG64`` generator
seeded with ``SeedSequence(seed, spawn_key=(label_index, record_index))``;
the repetitive-class motif pool uses ``spawn_key=(MOTIF_KEY,)`` and the
split ``spawn_key=(SPLIT_KEY, label_index)``. Records are therefore
independent of generation order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .alphabet import BASE_SYMBOLS, DNA_SYMBOLS, PROTEIN_SYMBOLS, Base
from .errors import DegenerateClassError, ParseError

LABELS = (
    "DNA_UNIFORM",
    "DNA_AT_RICH",
    "DNA_GC_RICH",
    "DNA_REPETITIVE",
    "PROT_HYDROPHOBIC",
    "PROT_HYDROPHILIC",
    "PROT_MIXED",
)
LABEL_KIND = {lab: Base.DNA if lab.startswith("DNA_") else Base.PROTEIN for lab in LABELS}

DNA_LENGTH = (50, 201)
PROTEIN_LENGTH = (30, 150)

HYDROPHOBIC = "AVLIMFWCP"
CHARGED_POLAR = "DEKRHSTNQY"

SPLIT_KEY = 0x5EED
MOTIF_KEY = 0x4D07
MOTIF_POOL_SIZE = 8

FASTA_WIDTH = 60


@dataclass(frozen=True)
class SequenceRecord:
    id: str
    label: str
    residues: str
    kind: Base

    def __post_init__(self):
        object.__setattr__(self, "kind", Base(self.kind))


@dataclass
class SynthConfig:
    """Composition knobs for the synthetic classes."""

    dna_length: tuple[int, int] = DNA_LENGTH
    protein_length: tuple[int, int] = PROTEIN_LENGTH
    hydrophobic: str = HYDROPHOBIC
    charged_polar: str = CHARGED_POLAR
    hydrophobic_mass: float = 0.64
    charged_polar_mass: float = 0.72
    # 0 draws a fresh motif for every record instead of picking from a pool
    motif_pool_size: int = MOTIF_POOL_SIZE
    dna_probs: dict = field(default_factory=lambda: {
        "DNA_UNIFORM": {"A": 0.25, "T": 0.25, "G": 0.25, "C": 0.25},
        "DNA_AT_RICH": {"A": 0.40, "T": 0.40, "G": 0.10, "C": 0.10},
        "DNA_GC_RICH": {"A": 0.10, "T": 0.10, "G": 0.40, "C": 0.40},
    })


def _favoured(symbols: str, favoured: str, mass: float) -> np.ndarray:
    rest = [c for c in symbols if c not in favoured]
    return np.array([mass / len(favoured) if c in favoured else (1 - mass) / len(rest)
                     for c in symbols])


def symbol_probabilities(label: str, cfg: SynthConfig | None = None) -> dict[str, float] | None:
    """Per-symbol emission probabilities; None for the repetitive class."""
    cfg = cfg or SynthConfig()
    if label in cfg.dna_probs:
        return dict(cfg.dna_probs[label])
    if label == "DNA_REPETITIVE":
        return None
    if label == "PROT_HYDROPHOBIC":
        p = _favoured(PROTEIN_SYMBOLS, cfg.hydrophobic, cfg.hydrophobic_mass)
    elif label == "PROT_HYDROPHILIC":
        p = _favoured(PROTEIN_SYMBOLS, cfg.charged_polar, cfg.charged_polar_mass)
    elif label == "PROT_MIXED":
        p = np.full(20, 1 / 20)
    else:
        raise KeyError(label)
    return dict(zip(PROTEIN_SYMBOLS, p.tolist()))


def record_rng(seed: int, label_index: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(label_index, index)))
    )


def _random_motif(rng: np.random.Generator) -> str:
    return "".join(DNA_SYMBOLS[i] for i in rng.integers(0, 4, size=4))


@lru_cache(maxsize=64)
def motif_pool(seed: int, size: int = MOTIF_POOL_SIZE) -> tuple[str, ...]:
    """Uniform random 4-mers shared by all repetitive records of a dataset."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(MOTIF_KEY,))))
    return tuple(_random_motif(rng) for _ in range(size))


def generate_record(seed: int, label: str, index: int, cfg: SynthConfig | None = None
                    ) -> SequenceRecord:
    cfg = cfg or SynthConfig()
    rng = record_rng(seed, LABELS.index(label), index)
    kind = LABEL_KIND[label]
    lo, hi = cfg.dna_length if kind is Base.DNA else cfg.protein_length
    length = int(rng.integers(lo, hi + 1))
    if label == "DNA_REPETITIVE":
        if cfg.motif_pool_size > 0:
            pool = motif_pool(seed, cfg.motif_pool_size)
            motif = pool[int(rng.integers(0, len(pool)))]
        else:
            motif = _random_motif(rng)
        residues = (motif * (length // 4 + 1))[:length]
    else:
        probs = symbol_probabilities(label, cfg)
        symbols = list(probs)
        draws = rng.choice(len(symbols), size=length, p=np.array(list(probs.values())))
        residues = "".join(symbols[i] for i in draws)
    return SequenceRecord(f"{label}-{index:05d}", label, residues, kind)


def generate_dataset(seed: int, per_class: int = 1000, cfg: SynthConfig | None = None
                     ) -> list[SequenceRecord]:
    """``7 * per_class`` records, grouped by label in ``LABELS`` order."""
    if per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    return [generate_record(seed, label, i, cfg) for label in LABELS for i in range(per_class)]


@dataclass
class SplitDataset:
    train: list[SequenceRecord]
    test: list[SequenceRecord]


def stratified_split(records: Sequence[SequenceRecord], ratio: float = 0.8, seed: int = 0,
                     labels: Sequence[str] | None = None) -> SplitDataset:
    """Per-label seeded shuffle; the first ``ceil(ratio * count)`` go to train."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    by_label: dict[str, list[SequenceRecord]] = {}
    for r in records:
        by_label.setdefault(r.label, []).append(r)
    if labels is None:
        labels = [lab for lab in LABELS if lab in by_label] + sorted(
            lab for lab in by_label if lab not in LABELS
        )
    if not labels:
        raise DegenerateClassError("no records to split")
    train, test = [], []
    for lab in labels:
        group = by_label.get(lab, [])
        if not group:
            raise DegenerateClassError(f"class {lab!r} has no records")
        key = LABELS.index(lab) if lab in LABELS else len(LABELS) + sorted(by_label).index(lab)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(SPLIT_KEY, key))))
        order = rng.permutation(len(group))
        n_train = math.ceil(round(ratio * len(group), 9))
        if n_train == len(group):
            warnings.warn(f"class {lab!r}: all {len(group)} record(s) went to train; test is empty")
        train.extend(group[i] for i in order[:n_train])
        test.extend(group[i] for i in order[n_train:])
    return SplitDataset(train, test)


def class_counts(records: Iterable[SequenceRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in records:
        counts[r.label] = counts.get(r.label, 0) + 1
    return counts


# --- FASTA ---------------------------------------------------------------

def write_fasta(records: Iterable[SequenceRecord], path, comment: str | None = None) -> None:
    """Headers ``>id|label|kind``; bodies wrapped at 60 columns.

    ``comment`` becomes a leading ``;`` line, which :func:`read_fasta` skips.
    """
    with open(path, "w") as fh:
        if comment:
            fh.write(f";{comment}\n")
        for r in records:
            fh.write(f">{r.id}|{r.label}|{r.kind.value}\n")
            for i in range(0, len(r.residues), FASTA_WIDTH):
                fh.write(r.residues[i : i + FASTA_WIDTH] + "\n")


def _finish(header, lineno, chunks, out):
    rid, label, kind, allowed = header
    residues = "".join(c for c, _ in chunks)
    # locate any illegal symbol for a precise error position
    for body, body_line in chunks:
        for col, ch in enumerate(body, start=1):
            if ch not in allowed:
                raise ParseError(f"illegal {kind.value} symbol {ch!r} at column {col}", body_line)
    if not residues:
        raise ParseError(f"record {rid!r} has an empty sequence", lineno)
    out.append(SequenceRecord(rid, label, residues, kind))


def read_fasta(path) -> list[SequenceRecord]:
    records: list[SequenceRecord] = []
    header = None
    header_line = 0
    chunks: list[tuple[str, int]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(";"):
                continue
            if line.startswith(">"):
                if header is not None:
                    _finish(header, header_line, chunks, records)
                parts = line[1:].split("|")
                if len(parts) != 3 or not all(parts):
                    raise ParseError(f"header {line!r} is not '>id|label|kind'", lineno)
                rid, label, kind = parts
                try:
                    kind = Base(kind.upper())
                except ValueError:
                    raise ParseError(f"unknown sequence kind {kind!r}", lineno) from None
                if label in LABEL_KIND and LABEL_KIND[label] is not kind:
                    raise ParseError(f"label {label} is not a {kind.value} class", lineno)
                header = (rid, label, kind, set(BASE_SYMBOLS[kind]))
                header_line = lineno
                chunks = []
            else:
                if header is None:
                    raise ParseError("sequence data before the first header", lineno)
                chunks.append((line.upper(), lineno))
    if header is not None:
        _finish(header, header_line, chunks, records)
    return records


def write_manifest(path, seed: int, per_class: int, records: Sequence[SequenceRecord],
                   extra: dict | None = None) -> dict:
    import json

    manifest = {"seed": seed, "per_class": per_class, "counts": class_counts(records)}
    if extra:
        manifest.update(extra)
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
