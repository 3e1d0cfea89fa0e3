"""Combinatorial types of nonattacking rider configurations.

Two encodings of the same data: T1 gives, for every ordered piece pair
(i, k), the index 1..2r of the cone of piece i's move-line arrangement that
contains piece k; T2 gives, for every (piece i, move line j, piece k), the
side of the oriented line.  Region numbering is anchored at the ray of
smallest nonnegative angle from the positive x-axis and runs counterclockwise,
so signatures are reproducible across runs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .geometry import BasicMove, GeometryError, MoveSet, Point, Side


class AttackError(ValueError):
    """Raised when a configuration expected to be nonattacking is not."""


@dataclass(frozen=True)
class Config:
    """Ordered list of piece positions; all distinct."""

    pieces: tuple[Point, ...]

    def __post_init__(self):
        if not self.pieces:
            raise GeometryError("a configuration needs at least one piece")
        if len(set(self.pieces)) != len(self.pieces):
            raise GeometryError("pieces must occupy distinct points")

    @property
    def q(self) -> int:
        return len(self.pieces)


def _halfplane(v: tuple[int, int]) -> int:
    # 0 for angle in [0, pi), 1 for [pi, 2*pi)
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_lt(a: tuple[int, int], b: tuple[int, int]) -> bool:
    ha, hb = _halfplane(a), _halfplane(b)
    if ha != hb:
        return ha < hb
    return a[0] * b[1] - a[1] * b[0] > 0


@lru_cache(maxsize=None)
def _ray_order(moves: tuple[BasicMove, ...]) -> tuple[BasicMove, ...]:
    rays = [m for m in moves] + [m.negated() for m in moves]
    # insertion sort with the exact angular comparator; 2r stays tiny
    ordered: list[BasicMove] = []
    for ray in rays:
        pos = 0
        while pos < len(ordered) and _angle_lt(
            (ordered[pos].c, ordered[pos].d), (ray.c, ray.d)
        ):
            pos += 1
        ordered.insert(pos, ray)
    return tuple(ordered)


def region_numbering(ms: MoveSet) -> tuple[BasicMove, ...]:
    """The 2r rays +-m_j sorted counterclockwise from the smallest nonnegative
    angle; region k is the open cone strictly between rays k and k+1 (cyclic),
    and regions k and k+r are antipodal."""
    return _ray_order(ms.moves)


def cone_index(ms: MoveSet, v: tuple[Fraction, Fraction]) -> int:
    """Index 1..2r of the open cone containing direction v.

    Exact: v must not be parallel to any move (raises AttackError otherwise).
    """
    num = (v[0].numerator * v[1].denominator, v[1].numerator * v[0].denominator)
    for j, m in enumerate(ms.moves, start=1):
        if m.c * num[1] - m.d * num[0] == 0:
            raise AttackError(f"direction {v} lies on move line {j} (slope of {m})")
    rays = _ray_order(ms.moves)
    count = sum(1 for ray in rays if _angle_lt((ray.c, ray.d), num))
    return count if count >= 1 else 2 * len(ms.moves)


def _cone_interior(rays: Sequence[BasicMove], k: int) -> tuple[int, int]:
    # interior direction of the open cone between rays k and k+1 (1-based)
    a = rays[k - 1]
    b = rays[k % len(rays)]
    cross = a.c * b.d - a.d * b.c
    if cross > 0:
        return (a.c + b.c, a.d + b.d)
    # r = 1: the two rays are antipodal, the gap is an open half-plane
    return (-a.d, a.c)


@lru_cache(maxsize=None)
def _cone_side_patterns(moves: tuple[BasicMove, ...]) -> tuple[tuple[Side, ...], ...]:
    """For each region index, the Left/Right pattern against every move line."""
    rays = _ray_order(moves)
    patterns = []
    for k in range(1, len(rays) + 1):
        wx, wy = _cone_interior(rays, k)
        pattern = []
        for m in moves:
            cross = m.c * wy - m.d * wx
            assert cross != 0, "cone interior cannot lie on a move line"
            pattern.append(Side.LEFT if cross > 0 else Side.RIGHT)
        patterns.append(tuple(pattern))
    return tuple(patterns)


def is_nonattacking(ms: MoveSet, cfg: Config) -> bool:
    """True iff no piece lies on a move line of another piece."""
    for i in range(cfg.q):
        for k in range(i + 1, cfg.q):
            dx, dy = cfg.pieces[k] - cfg.pieces[i]
            for m in ms.moves:
                if m.c * dy - m.d * dx == 0:
                    return False
    return True


def attack_witness(ms: MoveSet, cfg: Config):
    """First (i, k, j) with piece k on move line j of piece i, or None."""
    for i in range(cfg.q):
        for k in range(i + 1, cfg.q):
            dx, dy = cfg.pieces[k] - cfg.pieces[i]
            for j, m in enumerate(ms.moves, start=1):
                if m.c * dy - m.d * dx == 0:
                    return (i + 1, k + 1, j)
    return None


@dataclass(frozen=True)
class LabelledType:
    """T1 encoding: region index of piece k around piece i, all ordered pairs."""

    q: int
    r: int
    entries: tuple[tuple[int, int, int], ...]  # (i, k, region), sorted by (i, k)
    _lookup: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        entries = tuple(sorted(self.entries))
        object.__setattr__(self, "entries", entries)
        lookup = {(i, k): region for i, k, region in entries}
        object.__setattr__(self, "_lookup", lookup)
        expected = {(i, k) for i in range(1, self.q + 1) for k in range(1, self.q + 1) if i != k}
        if set(lookup) != expected:
            raise GeometryError("labelled type must cover every ordered pair exactly once")
        period = 2 * self.r
        for (i, k), region in lookup.items():
            if not 1 <= region <= period:
                raise GeometryError(f"region index {region} outside 1..{period}")
            opposite = (region + self.r - 1) % period + 1
            if lookup[(k, i)] != opposite:
                raise GeometryError(
                    f"antipodal invariant broken at ({i},{k}): "
                    f"{region} vs {lookup[(k, i)]}"
                )

    def region(self, i: int, k: int) -> int:
        return self._lookup[(i, k)]

    def key(self) -> tuple[int, ...]:
        """Flattened region indices in sorted (i, k) order."""
        return tuple(region for _, _, region in self.entries)

    def relabel(self, sigma: Sequence[int]) -> "LabelledType":
        """Apply a permutation of 1..q: entry (i, k) takes the region of
        (sigma(i), sigma(k))."""
        entries = tuple(
            (i, k, self._lookup[(sigma[i - 1], sigma[k - 1])])
            for i in range(1, self.q + 1)
            for k in range(1, self.q + 1)
            if i != k
        )
        return LabelledType(self.q, self.r, entries)


def labelled_type(ms: MoveSet, cfg: Config) -> LabelledType:
    """T1 type of a nonattacking configuration (raises AttackError otherwise)."""
    witness = attack_witness(ms, cfg)
    if witness is not None:
        i, k, j = witness
        raise AttackError(
            f"pieces {i} and {k} attack along move {j} ({ms.moves[j - 1]})"
        )
    entries = []
    for i in range(cfg.q):
        for k in range(cfg.q):
            if i == k:
                continue
            v = cfg.pieces[k] - cfg.pieces[i]
            entries.append((i + 1, k + 1, cone_index(ms, v)))
    return LabelledType(cfg.q, ms.r, tuple(entries))


@dataclass(frozen=True)
class UnlabelledType:
    """A labelled type up to piece relabeling, stored as the lexicographic
    minimum of the flattened entries over all q! permutations."""

    canonical: LabelledType


def canonical_unlabelled(t: LabelledType) -> UnlabelledType:
    if t.q == 1:
        return UnlabelledType(t)
    best = None
    for sigma in itertools.permutations(range(1, t.q + 1)):
        candidate = t.relabel(sigma)
        if best is None or candidate.key() < best.key():
            best = candidate
    return UnlabelledType(best)


def orbit_size(u: UnlabelledType) -> int:
    """Number of distinct labelled types obtained by relabeling."""
    t = u.canonical
    if t.q == 1:
        return 1
    return len({t.relabel(s).key() for s in itertools.permutations(range(1, t.q + 1))})


@dataclass(frozen=True)
class T2Type:
    """Side data per (piece i, move line j, piece k) triple."""

    q: int
    r: int
    triples: tuple[tuple[int, int, int, Side], ...]  # (i, j, k, side), sorted

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(sorted(self.triples)))

    def side(self, i: int, j: int, k: int) -> Side:
        for ti, tj, tk, side in self.triples:
            if (ti, tj, tk) == (i, j, k):
                return side
        raise KeyError((i, j, k))


def t1_to_t2(t: LabelledType, ms: MoveSet) -> T2Type:
    """Convert region indices into per-line side data."""
    if ms.r != t.r:
        raise GeometryError("move set size does not match the type")
    patterns = _cone_side_patterns(ms.moves)
    triples = []
    for i, k, region in t.entries:
        for j, side in enumerate(patterns[region - 1], start=1):
            triples.append((i, j, k, side))
    return T2Type(t.q, t.r, tuple(triples))


def t2_to_t1(t2: T2Type, ms: MoveSet) -> LabelledType:
    """Inverse conversion; raises if a side pattern matches no region."""
    if ms.r != t2.r:
        raise GeometryError("move set size does not match the type")
    patterns = _cone_side_patterns(ms.moves)
    index_of = {pattern: idx + 1 for idx, pattern in enumerate(patterns)}
    by_pair: dict[tuple[int, int], dict[int, Side]] = {}
    for i, j, k, side in t2.triples:
        by_pair.setdefault((i, k), {})[j] = side
    entries = []
    for (i, k), sides in by_pair.items():
        if sorted(sides) != list(range(1, t2.r + 1)):
            raise GeometryError(f"pair ({i},{k}) is missing side data for some line")
        pattern = tuple(sides[j] for j in range(1, t2.r + 1))
        region = index_of.get(pattern)
        if region is None:
            raise GeometryError(f"side pattern {pattern} matches no region of {ms}")
        entries.append((i, k, region))
    return LabelledType(t2.q, t2.r, tuple(entries))


def reorient(ms: MoveSet, j: int) -> MoveSet:
    """Move set with basic move j replaced by its negative."""
    return ms.reorient(j)


def reorient_type(t: LabelledType, ms: MoveSet, j: int) -> LabelledType:
    """Type of the same configuration after reorienting move j.

    Routed through T2 (flip every side on line j, reconvert under the
    reoriented move set).  With the angle-anchored T1 numbering the cones keep
    their indices, so this is the identity on T1 data; the conversion is kept
    as a consistency check rather than shortcut.
    """
    if not 1 <= j <= ms.r:
        raise GeometryError(f"move index {j} out of range 1..{ms.r}")
    t2 = t1_to_t2(t, ms)
    flipped = tuple(
        (i, jj, k, (Side.RIGHT if side is Side.LEFT else Side.LEFT) if jj == j else side)
        for i, jj, k, side in t2.triples
    )
    return t2_to_t1(T2Type(t2.q, t2.r, flipped), ms.reorient(j))


# -- serialization -----------------------------------------------------------

def type_to_dict(t: LabelledType) -> dict:
    return {"q": t.q, "r": t.r, "entries": [list(e) for e in t.entries]}


def type_from_dict(data: dict) -> LabelledType:
    entries = tuple((int(i), int(k), int(region)) for i, k, region in data["entries"])
    return LabelledType(int(data["q"]), int(data["r"]), entries)


def type_to_json(t: LabelledType) -> str:
    return json.dumps(type_to_dict(t), sort_keys=True)


def type_from_json(text: str) -> LabelledType:
    return type_from_dict(json.loads(text))
