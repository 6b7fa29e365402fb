"""Run configuration: defaults, ``key = value`` config files, CLI overrides.

Config file format, one setting per line::

    # comment
    seed = 42
    per_class = 1000
    scales = 1,2,3,4
    set = kmer+cgr
    lambda = 1.0
    override_large_alphabet = false

Keys use the long flag names with dashes turned into underscores. Blank
lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .errors import ParseError

FORMAT_VERSION = "msrcgr/1"


@dataclass
class RunConfig:
    seed: int = 42
    per_class: int = 1000
    ratio: float = 0.8
    scales: tuple[int, ...] = (1, 2, 3, 4)
    set: str = "cgr"
    lam: float = 1.0
    max_iter: int = 500
    embeddings: str | None = None
    vocab: str | None = None
    out: str | None = None
    kind: str = "DNA"
    fast: bool = False
    override_large_alphabet: bool = False
    embed_dim: int = 320
    embed_seed: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scales"] = list(self.scales)
        d["lambda"] = d.pop("lam")
        return d


_ALIASES = {"lambda": "lam", "per-class": "per_class"}


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if name == "scales":
        return parse_scales(raw)
    if "bool" in kind:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("float"):
        return float(raw)
    return None if raw.lower() in ("", "none") else raw


def parse_scales(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    scales = tuple(int(v) for v in str(text).replace(" ", "").split(",") if v)
    if not scales or min(scales) < 1:
        raise ValueError(f"bad scale list {text!r}")
    return scales


def load_config_file(path) -> dict:
    known = {f.name for f in fields(RunConfig)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
            key = key.strip().replace("-", "_")
            key = _ALIASES.get(key, key)
            if key not in known:
                raise ParseError(f"unknown config key {key!r}", lineno)
            try:
                values[key] = _coerce(key, val.strip())
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
    return values


def resolve(config_path=None, **overrides) -> RunConfig:
    """Defaults, then the config file, then any override that is not None."""
    cfg = RunConfig()
    if config_path:
        for k, v in load_config_file(config_path).items():
            setattr(cfg, k, v)
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    return cfg
