"""Base and k-mer-extended alphabets and their exact corner tables.

The scale-k alphabet is the full set of ``m**k`` k-mers over the base symbol
order, ranked lexicographically. Corner ``i`` of an alphabet of size ``M`` is
the unit-circle point at angle ``2*pi*i/M`` floored onto the q-grid with
``q = grid_modulus(M)``.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import AlphabetTooLargeError, InvalidTokenError
from .exact import Point2, grid_modulus, snap_round_q


class Base(str, enum.Enum):
    DNA = "DNA"
    PROTEIN = "PROTEIN"


# Format constants: the corner assignment depends on these orders.
DNA_SYMBOLS = "ATGC"
PROTEIN_SYMBOLS = "ACDEFGHIKLMNPQRSTVWY"

BASE_SYMBOLS = {Base.DNA: DNA_SYMBOLS, Base.PROTEIN: PROTEIN_SYMBOLS}

MAX_ALPHABET_SIZE = 65_536


@dataclass(frozen=True)
class Alphabet:
    base: Base
    k: int
    symbols: str = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.symbols)

    @property
    def size(self) -> int:
        return self.m**self.k

    @property
    def name(self) -> str:
        return f"{self.base.value}/k={self.k}"

    @cached_property
    def tokens(self) -> tuple[str, ...]:
        return tuple("".join(p) for p in itertools.product(self.symbols, repeat=self.k))

    @cached_property
    def _symbol_rank(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.symbols)}

    def index(self, token: str, offset: int = 0) -> int:
        """Lexicographic rank of ``token``; ``offset`` shifts reported positions."""
        if len(token) != self.k:
            raise InvalidTokenError(
                f"token {token!r} has length {len(token)}, expected {self.k}", position=offset
            )
        rank = self._symbol_rank
        idx = 0
        for pos, ch in enumerate(token.upper()):
            r = rank.get(ch)
            if r is None:
                raise InvalidTokenError(
                    f"invalid {self.base.value} symbol {ch!r} at position {offset + pos}",
                    position=offset + pos,
                )
            idx = idx * self.m + r
        return idx


def build_alphabet(base: Base | str, k: int, *, allow_large: bool = False) -> Alphabet:
    """Full lexicographic k-mer alphabet over ``base``.

    Alphabets larger than ``MAX_ALPHABET_SIZE`` (PROTEIN k=4 and up, DNA k>8)
    are refused unless ``allow_large`` is set.
    """
    base = Base(base)
    if k < 1:
        raise InvalidTokenError(f"k must be >= 1, got {k}")
    alphabet = Alphabet(base, k, BASE_SYMBOLS[base])
    if alphabet.size > MAX_ALPHABET_SIZE and not allow_large:
        raise AlphabetTooLargeError(
            f"{alphabet.name} has {alphabet.size} tokens (limit {MAX_ALPHABET_SIZE}); "
            "pass allow_large / --override-large-alphabet to permit it"
        )
    return alphabet


def token_index(alphabet: Alphabet, token: str) -> int:
    return alphabet.index(token)


def _corner(i: int, size: int, q: int) -> Point2:
    theta = 2 * math.pi * i / size
    return Point2(snap_round_q(math.cos(theta), q), snap_round_q(math.sin(theta), q))


@dataclass(frozen=True, eq=False)
class CornerTable:
    """Exact corners for one alphabet.

    Corners are produced on demand and memoised, so very large alphabets only
    pay for the tokens they actually see; ``corners`` materialises the whole
    table.
    """

    alphabet: Alphabet
    q: int
    _memo: dict = field(default_factory=dict, init=False, repr=False)
    _float_memo: dict = field(default_factory=dict, init=False, repr=False)

    def corner(self, i: int) -> Point2:
        c = self._memo.get(i)
        if c is None:
            if not 0 <= i < self.alphabet.size:
                raise IndexError(f"corner index {i} outside alphabet {self.alphabet.name}")
            c = self._memo[i] = _corner(i, self.alphabet.size, self.q)
        return c

    def __len__(self) -> int:
        return self.alphabet.size

    @cached_property
    def corners(self) -> tuple[Point2, ...]:
        return tuple(self.corner(i) for i in range(self.alphabet.size))

    @cached_property
    def _lookup(self) -> dict[Point2, int]:
        return {c: i for i, c in enumerate(self.corners)}

    def find(self, point: Point2) -> int | None:
        """Index of the corner exactly equal to ``point``, or None."""
        return self._lookup.get(point)

    def corner_of(self, token: str, offset: int = 0) -> Point2:
        return self.corner(self.alphabet.index(token, offset))

    def float_corner(self, token: str, offset: int = 0) -> tuple[float, float]:
        """Corner of ``token`` as doubles, memoised by token text."""
        c = self._float_memo.get(token)
        if c is None:
            c = self._float_memo[token] = self.corner_of(token, offset).to_float()
        return c


@lru_cache(maxsize=None)
def _shared_table(base: Base, k: int) -> CornerTable:
    alphabet = build_alphabet(base, k, allow_large=True)
    return CornerTable(alphabet, grid_modulus(alphabet.size))


def corner_points(alphabet: Alphabet) -> CornerTable:
    return _shared_table(alphabet.base, alphabet.k)


def corner_table(base: Base | str, k: int, *, allow_large: bool = False) -> CornerTable:
    """Shared corner table for ``(base, k)``, subject to the size cap."""
    return corner_points(build_alphabet(base, k, allow_large=allow_large))
