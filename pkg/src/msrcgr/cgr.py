"""Multi-scale chaos game encoding and its exact inverse.

A trajectory at scale k starts at the origin and moves halfway toward the
corner of each successive k-mer of the sliding-window stream. Because every
corner sits on the q-grid and corners are pairwise distinct, the step
``2*p[t] - p[t-1]`` recovers the corner (and hence the k-mer) of step t
exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .alphabet import Base, CornerTable, corner_table
from .errors import (
    CorruptedTrajectoryError,
    InconsistentStreamError,
    MsrcgrError,
    SequenceTooShortError,
)
from .exact import ORIGIN, Point2, midpoint

DEFAULT_SCALES = (1, 2, 3, 4)


@dataclass(frozen=True)
class Trajectory:
    scale: int
    points: tuple[Point2, ...]
    n: int
    corners: CornerTable

    @property
    def n_k(self) -> int:
        return len(self.points) - 1

    @property
    def alphabet_name(self) -> str:
        return self.corners.alphabet.name


def kmer_stream(s: str, k: int) -> list[str]:
    if k < 1:
        raise SequenceTooShortError(f"scale must be >= 1, got {k}", scale=k)
    if len(s) < k:
        raise SequenceTooShortError(
            f"sequence of length {len(s)} is shorter than scale k={k}", scale=k
        )
    return [s[t : t + k] for t in range(len(s) - k + 1)]


def encode_scale(s: str, k: int, corners: CornerTable | None = None, *, base=Base.DNA,
                 allow_large: bool = False) -> Trajectory:
    """Exact trajectory of ``s`` at scale ``k``.

    ``corners`` defaults to the shared table for ``(base, k)``.
    """
    if corners is None:
        corners = corner_table(base, k, allow_large=allow_large)
    elif corners.alphabet.k != k:
        raise MsrcgrError(f"corner table is for k={corners.alphabet.k}, not k={k}")
    s = s.upper()
    tokens = kmer_stream(s, k)
    points = [ORIGIN]
    p = ORIGIN
    for t, w in enumerate(tokens):
        p = midpoint(p, corners.corner_of(w, offset=t))
        points.append(p)
    return Trajectory(k, tuple(points), len(s), corners)


def encode_multiscale(s: str, scales: Iterable[int] = DEFAULT_SCALES, *, base=Base.DNA,
                      allow_large: bool = False) -> dict[int, Trajectory]:
    scales = sorted(set(scales))
    for k in scales:
        if k > len(s):
            raise SequenceTooShortError(
                f"scale k={k} exceeds sequence length {len(s)}", scale=k
            )
    return {k: encode_scale(s, k, base=base, allow_large=allow_large) for k in scales}


def decode_tokens(points: Sequence[Point2], corners: CornerTable) -> list[str]:
    """Recover the k-mer stream from trajectory points.

    Each step is independent of the others, so steps are checked in ascending
    order and the first bad one is reported.
    """
    if not points or points[0] != ORIGIN:
        raise CorruptedTrajectoryError("trajectory does not start at the origin", step=0)
    tokens = corners.alphabet.tokens
    two = 2
    out = []
    prev = points[0]
    for t in range(1, len(points)):
        cur = points[t]
        c = Point2(two * cur.x - prev.x, two * cur.y - prev.y)
        i = corners.find(c)
        if i is None:
            raise CorruptedTrajectoryError(
                f"step {t}: recovered point ({c.x}, {c.y}) matches no corner of "
                f"{corners.alphabet.name}",
                step=t,
            )
        out.append(tokens[i])
        prev = cur
    return out


def assemble(tokens: Sequence[str]) -> str:
    """Rebuild a sequence from its ordered sliding-window k-mers."""
    if not tokens:
        return ""
    k = len(tokens[0])
    parts = [tokens[0]]
    for t in range(1, len(tokens)):
        if tokens[t - 1][1:] != tokens[t][: k - 1]:
            raise InconsistentStreamError(
                f"step {t + 1}: k-mer {tokens[t]!r} does not overlap {tokens[t - 1]!r} "
                f"in {k - 1} symbols",
                step=t + 1,
            )
        parts.append(tokens[t][-1])
    return "".join(parts)


def decode(trajectory: Trajectory, corners: CornerTable | None = None) -> str:
    corners = corners if corners is not None else trajectory.corners
    return assemble(decode_tokens(trajectory.points, corners))


def closed_form_point(corner_seq: Sequence[Point2], t: int) -> Point2:
    """``p_t`` as the weighted sum of the first ``t`` corners."""
    x = Fraction(0)
    y = Fraction(0)
    for j in range(1, t + 1):
        w = Fraction(1, 2 ** (t - j + 1))
        c = corner_seq[j - 1]
        x += w * c.x
        y += w * c.y
    return Point2(x, y)


@dataclass(frozen=True)
class PrecisionReport:
    max_denominator: int
    bound: int
    satisfied: bool


def check_precision_bound(trajectory: Trajectory) -> PrecisionReport:
    """Denominator growth check.

    ``satisfied`` requires the denominator of every coordinate of ``p[t]`` to
    divide ``q * 2**t``, which implies division of the reported bound
    ``q * 2**n_k``.
    """
    q = trajectory.corners.q
    max_den = 1
    ok = True
    for t, p in enumerate(trajectory.points):
        limit = q << t
        for v in p:
            d = v.denominator
            max_den = max(max_den, d)
            ok = ok and limit % d == 0
    return PrecisionReport(max_den, q << trajectory.n_k, ok)


# --- serialization -------------------------------------------------------

def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _parse_frac(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def trajectory_to_dict(trajectory: Trajectory, tokens: Sequence[str] | None = None) -> dict:
    """JSON-ready dict with exact ``"num/den"`` coordinates.

    Keys ``scale, n, points, tokens`` come first in that order; ``alphabet``
    follows so a file can be decoded without outside context.
    """
    if tokens is None:
        tokens = decode_tokens(trajectory.points, trajectory.corners)
    return {
        "scale": trajectory.scale,
        "n": trajectory.n,
        "points": [[_frac_str(p.x), _frac_str(p.y)] for p in trajectory.points],
        "tokens": list(tokens),
        "alphabet": trajectory.corners.alphabet.base.value,
    }


def trajectory_from_dict(data: dict, *, allow_large: bool = False) -> tuple[Trajectory, list[str]]:
    """Inverse of :func:`trajectory_to_dict`; returns the trajectory and stored tokens."""
    k = int(data["scale"])
    base = data.get("alphabet", Base.DNA.value)
    corners = corner_table(base, k, allow_large=allow_large)
    points = tuple(Point2(_parse_frac(x), _parse_frac(y)) for x, y in data["points"])
    return Trajectory(k, points, int(data["n"]), corners), list(data.get("tokens", []))


def dump_trajectory(trajectory: Trajectory, path) -> None:
    with open(path, "w") as fh:
        json.dump(trajectory_to_dict(trajectory), fh)


def load_trajectory(path, *, allow_large: bool = False) -> tuple[Trajectory, list[str]]:
    with open(path) as fh:
        return trajectory_from_dict(json.load(fh), allow_large=allow_large)


# --- fixed-precision path (features only, never decoded) -----------------

def encode_scale_float(s: str, k: int, corners: CornerTable) -> list[tuple[float, float]]:
    """Double-precision trajectory points ``p_1..p_n_k`` (origin omitted)."""
    s = s.upper()
    tokens = kmer_stream(s, k)
    lookup = corners.float_corner
    x = y = 0.0
    out = []
    for t, w in enumerate(tokens):
        c = lookup(w, t)
        x = 0.5 * (x + c[0])
        y = 0.5 * (y + c[1])
        out.append((x, y))
    return out
