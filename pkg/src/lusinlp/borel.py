"""Exact finite interval unions on [0, 1].

The computable Borel sets used throughout the package are finite unions of
half-open intervals ``[lo, hi)`` with rational endpoints (:class:`IntervalSet`)
and finite unions of closed intervals (:class:`CompactSet`). Everything here
is done in :class:`fractions.Fraction`, so measures and set operations are
exact and independent of evaluation order.
"""

from __future__ import annotations

import json
import math
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ._exact import as_rational, fmt

__all__ = [
    "IntervalSet",
    "CompactSet",
    "DyadicCover",
    "union",
    "intersect",
    "complement",
    "symm_diff",
    "difference",
    "measure",
    "inner_compact",
    "outer_open",
    "dyadic_cover",
    "dyadic_level_error",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def _check_unit(x: Fraction) -> None:
    if not (ZERO <= x <= ONE):
        raise ValueError(f"endpoint {x} outside [0, 1]")


@dataclass(frozen=True)
class IntervalSet:
    """Finite disjoint union of half-open intervals ``[lo, hi)`` in [0, 1].

    Instances are always in canonical form: sorted, non-empty pieces, and a
    strictly positive gap between consecutive pieces (touching pieces are
    merged). Use :meth:`of` to build one from arbitrary pieces.
    """

    pieces: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        prev_hi = None
        for lo, hi in self.pieces:
            if not (isinstance(lo, Fraction) and isinstance(hi, Fraction)):
                raise TypeError("IntervalSet endpoints must be Fractions; use IntervalSet.of")
            _check_unit(lo)
            _check_unit(hi)
            if not lo < hi:
                raise ValueError(f"empty or reversed piece [{lo}, {hi})")
            if prev_hi is not None and not prev_hi < lo:
                raise ValueError("pieces must be sorted with positive gaps")
            prev_hi = hi

    @classmethod
    def of(cls, pieces: Iterable[Sequence] = ()) -> "IntervalSet":
        """Normalize arbitrary (possibly overlapping) pieces."""
        raw = []
        for lo, hi in pieces:
            lo, hi = as_rational(lo), as_rational(hi)
            _check_unit(lo)
            _check_unit(hi)
            if lo < hi:
                raw.append((lo, hi))
        raw.sort()
        out: list[tuple[Fraction, Fraction]] = []
        for lo, hi in raw:
            if out and lo <= out[-1][1]:
                if hi > out[-1][1]:
                    out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
        return cls(tuple(out))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((ZERO, ONE),))

    @classmethod
    def interval(cls, lo, hi) -> "IntervalSet":
        return cls.of([(lo, hi)])

    @cached_property
    def _starts(self) -> list[Fraction]:
        return [lo for lo, _ in self.pieces]

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def contains(self, t) -> bool:
        t = as_rational(t)
        i = bisect_right(self._starts, t) - 1
        return i >= 0 and t < self.pieces[i][1]

    __contains__ = contains

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.pieces), ZERO)

    def endpoints(self) -> list[Fraction]:
        return [x for piece in self.pieces for x in piece]

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return union(self, other)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return intersect(self, other)

    def __xor__(self, other: "IntervalSet") -> "IntervalSet":
        return symm_diff(self, other)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return difference(self, other)

    def __invert__(self) -> "IntervalSet":
        return complement(self)

    def __str__(self) -> str:
        if not self.pieces:
            return "{}"
        return " u ".join(f"[{lo}, {hi})" for lo, hi in self.pieces)

    def to_json(self) -> list[list[str]]:
        return [[fmt(lo), fmt(hi)] for lo, hi in self.pieces]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        if isinstance(data, str):
            return cls.parse(data)
        return cls.of((lo, hi) for lo, hi in data)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse ``"[0, 1/3) u [1/2, 1)"`` or a JSON array of pairs."""
        text = text.strip()
        if text in ("", "{}", "empty"):
            return cls.empty()
        if text.startswith("[["):
            return cls.from_json(json.loads(text))
        pieces = []
        for chunk in re.split(r"\s*(?:u|U|∪)\s*", text):
            m = re.fullmatch(r"\[\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)", chunk)
            if not m:
                raise ValueError(f"cannot parse interval {chunk!r}")
            if as_rational(m.group(1)) > as_rational(m.group(2)):
                raise ValueError(f"reversed interval {chunk!r}")
            pieces.append((m.group(1), m.group(2)))
        return cls.of(pieces)


def _combine(a: IntervalSet, b: IntervalSet, keep) -> IntervalSet:
    pts = sorted(set(a.endpoints()) | set(b.endpoints()))
    out = []
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        if keep(a.contains(mid), b.contains(mid)):
            out.append((lo, hi))
    return IntervalSet.of(out)


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet.of(a.pieces + b.pieces)


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and y)


def difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and not y)


def symm_diff(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x != y)


def complement(a: IntervalSet) -> IntervalSet:
    """Complement within ``[0, 1)``."""
    out = []
    cur = ZERO
    for lo, hi in a.pieces:
        if lo > cur:
            out.append((cur, lo))
        cur = hi
    if cur < ONE:
        out.append((cur, ONE))
    return IntervalSet(tuple(out))


@dataclass(frozen=True)
class CompactSet:
    """Finite disjoint union of closed intervals ``[lo, hi]`` in [0, 1].

    Degenerate pieces ``[x, x]`` are allowed. Consecutive pieces are separated
    by a strictly positive gap.
    """

    pieces: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        prev_hi = None
        for lo, hi in self.pieces:
            if not (isinstance(lo, Fraction) and isinstance(hi, Fraction)):
                raise TypeError("CompactSet endpoints must be Fractions; use CompactSet.of")
            _check_unit(lo)
            _check_unit(hi)
            if lo > hi:
                raise ValueError(f"reversed piece [{lo}, {hi}]")
            if prev_hi is not None and not prev_hi < lo:
                raise ValueError("closed pieces must be separated by positive gaps")
            prev_hi = hi

    @classmethod
    def of(cls, pieces: Iterable[Sequence] = ()) -> "CompactSet":
        raw = sorted((as_rational(lo), as_rational(hi)) for lo, hi in pieces)
        out: list[tuple[Fraction, Fraction]] = []
        for lo, hi in raw:
            if lo > hi:
                continue
            _check_unit(lo)
            _check_unit(hi)
            if out and lo <= out[-1][1]:
                if hi > out[-1][1]:
                    out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
        return cls(tuple(out))

    @classmethod
    def empty(cls) -> "CompactSet":
        return cls(())

    @classmethod
    def full(cls) -> "CompactSet":
        return cls(((ZERO, ONE),))

    @cached_property
    def _starts(self) -> list[Fraction]:
        return [lo for lo, _ in self.pieces]

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def contains(self, t) -> bool:
        t = as_rational(t)
        i = bisect_right(self._starts, t) - 1
        return i >= 0 and t <= self.pieces[i][1]

    __contains__ = contains

    def piece_index(self, t) -> int | None:
        """Index of the closed piece containing ``t``, or None."""
        t = as_rational(t)
        i = bisect_right(self._starts, t) - 1
        if i >= 0 and t <= self.pieces[i][1]:
            return i
        return None

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.pieces), ZERO)

    @property
    def excluded_measure(self) -> Fraction:
        """Lebesgue measure of ``[0, 1] \\ K``."""
        return ONE - self.measure

    def min_gap(self) -> Fraction | None:
        """Smallest distance between consecutive pieces; None for < 2 pieces."""
        gaps = [b[0] - a[1] for a, b in zip(self.pieces, self.pieces[1:])]
        return min(gaps) if gaps else None

    def intersect(self, other: "CompactSet") -> "CompactSet":
        out = []
        i = j = 0
        a, b = self.pieces, other.pieces
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return CompactSet.of(out)

    __and__ = intersect

    def union(self, other: "CompactSet") -> "CompactSet":
        return CompactSet.of(self.pieces + other.pieces)

    __or__ = union

    def to_intervalset(self) -> IntervalSet:
        """The a.e.-equal half-open set (drops right endpoints and points)."""
        return IntervalSet.of(self.pieces)

    def __str__(self) -> str:
        if not self.pieces:
            return "{}"
        return " u ".join(f"[{lo}, {hi}]" for lo, hi in self.pieces)

    def to_json(self) -> list[list[str]]:
        return [[fmt(lo), fmt(hi)] for lo, hi in self.pieces]


def measure(a: IntervalSet | CompactSet) -> Fraction:
    return a.measure


def inner_compact(a: IntervalSet, delta) -> CompactSet:
    """Closed subset K of ``a`` with ``measure(a) - measure(K) < delta``.

    Each piece ``[lo, hi)`` loses a right-hand strip of width
    ``s = delta / (10 k)`` (k = number of pieces) and becomes ``[lo, hi - s]``;
    pieces no longer than ``s`` are dropped. The total loss is at most
    ``delta / 10``.
    """
    delta = as_rational(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not a:
        return CompactSet.empty()
    s = delta / (10 * len(a))
    return CompactSet(tuple((lo, hi - s) for lo, hi in a.pieces if hi - lo > s))


def outer_open(a: IntervalSet, delta) -> IntervalSet:
    """Superset U of ``a``, open in [0, 1], with ``measure(U) - measure(a) < delta``.

    Every piece grows by ``delta / (5 k)`` on each side, clipped to [0, 1].
    """
    delta = as_rational(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not a:
        return IntervalSet.empty()
    e = delta / (5 * len(a))
    return IntervalSet.of((max(ZERO, lo - e), min(ONE, hi + e)) for lo, hi in a.pieces)


@dataclass(frozen=True)
class DyadicCover:
    """Union of level-``n`` dyadic cells ``[k/2^n, (k+1)/2^n)``.

    The selection is stored as sorted half-open index runs ``(start, stop)``;
    :attr:`selected` expands them into a set of cell indices.
    """

    level: int
    runs: tuple[tuple[int, int], ...] = ()
    error: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")
        prev = None
        for start, stop in self.runs:
            if not (0 <= start < stop <= 2**self.level):
                raise ValueError(f"bad cell run {(start, stop)} at level {self.level}")
            if prev is not None and not prev < start:
                raise ValueError("runs must be sorted and non-adjacent")
            prev = stop

    @classmethod
    def from_cells(cls, level: int, cells: Iterable[int]) -> "DyadicCover":
        runs: list[list[int]] = []
        for k in sorted(set(cells)):
            if runs and runs[-1][1] == k:
                runs[-1][1] = k + 1
            else:
                runs.append([k, k + 1])
        return cls(level, tuple((a, b) for a, b in runs))

    @cached_property
    def selected(self) -> frozenset[int]:
        return frozenset(k for a, b in self.runs for k in range(a, b))

    def as_intervalset(self) -> IntervalSet:
        n = 2**self.level
        return IntervalSet(tuple((Fraction(a, n), Fraction(b, n)) for a, b in self.runs))

    def cells_str(self) -> str:
        return ";".join(f"{a}" if b == a + 1 else f"{a}-{b - 1}" for a, b in self.runs)


def _level_profile(a: IntervalSet, level: int):
    """Full-cell runs and partial-cell coverage (in cell units) at ``level``."""
    n = 2**level
    full: list[tuple[int, int]] = []
    partial: dict[int, Fraction] = {}
    for lo, hi in a.pieces:
        x, y = lo * n, hi * n
        ka, kb = math.floor(x), math.ceil(y)
        if kb - ka == 1:
            if y - x == 1:
                full.append((ka, kb))
            else:
                partial[ka] = partial.get(ka, ZERO) + (y - x)
            continue
        first, last = ka, kb - 1
        if x > ka:
            partial[ka] = partial.get(ka, ZERO) + (ka + 1 - x)
            first = ka + 1
        if y < kb:
            partial[kb - 1] = partial.get(kb - 1, ZERO) + (y - (kb - 1))
            last = kb - 2
        if first <= last:
            full.append((first, last + 1))
    return full, partial


def dyadic_level_error(a: IntervalSet, level: int) -> Fraction:
    """``measure(a △ cover)`` for the majority-rule cover at ``level``."""
    _, partial = _level_profile(a, level)
    err = sum((min(c, 1 - c) for c in partial.values()), ZERO)
    return err / 2**level


def dyadic_cover(a: IntervalSet, eps) -> DyadicCover:
    """Smallest-level dyadic cover with ``measure(a △ cover) < eps``.

    A cell is selected iff more than half of it lies in ``a`` (ties excluded),
    which minimizes the symmetric difference at each level. Levels are
    searched upward from 0.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    level = 0
    while True:
        err = dyadic_level_error(a, level)
        if err < eps:
            break
        level += 1
    full, partial = _level_profile(a, level)
    cells = [k for k, c in partial.items() if c > Fraction(1, 2)]
    runs: list[list[int]] = []
    for start, stop in sorted(full + [(k, k + 1) for k in cells]):
        if runs and runs[-1][1] == start:
            runs[-1][1] = stop
        else:
            runs.append([start, stop])
    return DyadicCover(level, tuple((s, e) for s, e in runs), err)
