"""Particle arrangements: occupation lists, assignment lists, periodicity, classes.

An arrangement of N particles over n modes is stored as a mode occupation
list (counts per mode).  The equivalent mode assignment list names each
particle's mode, non-decreasing, mode j repeated counts[j-1] times.  Modes
are 1-based in every public value; internal numpy indices are 0-based.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidArrangementError, InvalidModeError


@dataclass(frozen=True)
class ModeOccupation:
    """Counts of particles per mode; the canonical arrangement representation."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) < 1:
            raise InvalidArrangementError("occupation needs at least one mode")
        arr = np.asarray(self.counts, dtype=np.int64)
        if arr.ndim != 1 or len(arr) != len(self.counts):
            raise InvalidArrangementError("occupation must be a flat integer list")
        if (arr < 0).any():
            raise InvalidArrangementError(f"negative count in occupation {self.counts}")
        arr.setflags(write=False)
        object.__setattr__(self, "_arr", arr)

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        """Total particle number N."""
        return int(self.counts_array.sum())

    @property
    def counts_array(self) -> np.ndarray:
        """Read-only int64 view of the counts (cached)."""
        return self.__dict__["_arr"]

    @property
    def is_pauli(self) -> bool:
        """True when no mode holds more than one particle."""
        return bool((self.counts_array <= 1).all())

    @classmethod
    def parse(cls, text: str) -> "ModeOccupation":
        try:
            counts = tuple(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise InvalidArrangementError(f"cannot parse occupation {text!r}") from exc
        return cls(counts)

    def to_string(self) -> str:
        return ",".join(str(c) for c in self.counts)

    def shifted(self, k: int) -> "ModeOccupation":
        """Cyclic shift moving mode j to mode j+k (wrapping)."""
        k %= self.n
        return ModeOccupation(self.counts[-k:] + self.counts[:-k] if k else self.counts)

    def reversed_modes(self) -> "ModeOccupation":
        return ModeOccupation(self.counts[::-1])


def as_occupation(value, n: int | None = None) -> ModeOccupation:
    """Coerce a ModeOccupation, integer sequence, or "2,0,0,1" string."""
    if isinstance(value, ModeOccupation):
        occ = value
    elif isinstance(value, str):
        occ = ModeOccupation.parse(value)
    else:
        occ = ModeOccupation(tuple(int(c) for c in value))
    if n is not None and occ.n != n:
        raise InvalidArrangementError(f"occupation has {occ.n} modes, expected {n}")
    return occ


@dataclass(frozen=True)
class Periodicity:
    """Minimal period decomposition of an occupation list."""

    m: int
    p: int
    pattern: tuple[int, ...]


@dataclass(frozen=True)
class ArrangementClass:
    """Orbit of an occupation under cyclic shifts and mode-order reversal."""

    representative: ModeOccupation
    members: int


def occupation_to_assignment(occ: ModeOccupation | Sequence[int]) -> tuple[int, ...]:
    """Mode assignment list: mode j repeated counts[j-1] times, non-decreasing."""
    occ = as_occupation(occ)
    out = np.repeat(np.arange(1, occ.n + 1, dtype=np.int64), occ.counts_array)
    return tuple(int(x) for x in out)


def assignment_to_occupation(entries: Iterable[int], n: int) -> ModeOccupation:
    """Inverse of occupation_to_assignment; entries may arrive unsorted."""
    if n < 1:
        raise InvalidArrangementError("need n >= 1")
    counts = [0] * n
    hist = Counter(int(e) for e in entries)
    for mode, k in hist.items():
        if not 1 <= mode <= n:
            raise InvalidModeError(f"mode {mode} outside 1..{n}")
        counts[mode - 1] = k
    return ModeOccupation(tuple(counts))


def assignment_sum(occ: ModeOccupation | Sequence[int]) -> int:
    """Sum of the mode assignment list, computed as sum_j j*counts[j-1]."""
    occ = as_occupation(occ)
    modes = np.arange(1, occ.n + 1, dtype=np.int64)
    return int(modes @ occ.counts_array)


def count_arrangements(n: int, N: int, species: str = "B") -> int:
    """Number of distinct arrangements: C(N+n-1, n-1) for D/B, C(n, N) for F."""
    if n < 1 or N < 0:
        raise InvalidArrangementError("need n >= 1 and N >= 0")
    tag = str(species)[:1].upper()
    if tag in ("D", "B"):
        return math.comb(N + n - 1, n - 1)
    if tag == "F":
        return math.comb(n, N) if N <= n else 0
    raise InvalidArrangementError(f"unknown species {species!r}")


def enumerate_occupations(n: int, N: int, pauli_only: bool = False) -> Iterator[ModeOccupation]:
    """Yield every occupation of N particles in n modes exactly once.

    Order is reverse-lexicographic in the counts, e.g. (2,0) > (1,1) > (0,2).
    With pauli_only, occupations with any count above 1 are skipped; N > n
    yields nothing (Pauli principle, not an error).
    """
    if n < 1 or N < 0:
        raise InvalidArrangementError("need n >= 1 and N >= 0")
    if pauli_only:
        if N > n:
            return
        # Position combinations in ascending lexicographic order coincide
        # with reverse-lexicographic order of the 0/1 count vectors.
        for modes in itertools.combinations(range(n), N):
            counts = [0] * n
            for j in modes:
                counts[j] = 1
            yield ModeOccupation(tuple(counts))
        return
    yield from (ModeOccupation(c) for c in _compositions(n, N))


def _compositions(n: int, total: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


def divisors(n: int) -> list[int]:
    """Positive divisors of n in ascending order."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def detect_periodicity(occ: ModeOccupation | Sequence[int]) -> Periodicity:
    """Minimal m (dividing n) such that the counts are a length-m pattern repeated n/m times."""
    occ = as_occupation(occ)
    cached = occ.__dict__.get("_period")
    if cached is not None:
        return cached
    if occ.total < 1:
        raise InvalidArrangementError("periodicity needs at least one particle")
    arr = occ.counts_array
    n = occ.n
    for m in divisors(n):
        p = n // m
        if (arr.reshape(p, m) == arr[:m]).all():
            per = Periodicity(m=m, p=p, pattern=tuple(occ.counts[:m]))
            object.__setattr__(occ, "_period", per)
            return per
    raise AssertionError("unreachable: m=n always matches")


def orbit(occ: ModeOccupation | Sequence[int]) -> set[tuple[int, ...]]:
    """Distinct images under the n cyclic shifts and the reversal of each shift."""
    occ = as_occupation(occ)
    counts = occ.counts
    rev = counts[::-1]
    images: set[tuple[int, ...]] = set()
    for k in range(occ.n):
        images.add(counts[k:] + counts[:k])
        images.add(rev[k:] + rev[:k])
    return images


def canonical_class(occ: ModeOccupation | Sequence[int]) -> ArrangementClass:
    """Lexicographically smallest orbit member and the orbit size (in [1, 2n])."""
    images = orbit(occ)
    return ArrangementClass(
        representative=ModeOccupation(min(images)),
        members=len(images),
    )


def _class_sort_key(cls: ArrangementClass) -> tuple:
    profile = tuple(sorted(cls.representative.counts, reverse=True))
    return tuple(-c for c in profile), cls.representative.counts


def enumerate_classes(n: int, N: int, pauli_only: bool = False) -> list[ArrangementClass]:
    """One class per orbit, sorted by descending occupancy profile then representative.

    Arrangements with many particles in few modes sort first.
    """
    seen: set[tuple[int, ...]] = set()
    classes: list[ArrangementClass] = []
    for occ in enumerate_occupations(n, N, pauli_only):
        if occ.counts in seen:
            continue
        images = orbit(occ)
        seen |= images
        classes.append(ArrangementClass(ModeOccupation(min(images)), len(images)))
    classes.sort(key=_class_sort_key)
    return classes
