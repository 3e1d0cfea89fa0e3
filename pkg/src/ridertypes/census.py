"""Census engines: enumerate the combinatorial types a rider can realize.

Three independent routes to the same answer (exact recursive geometric
placement, exhaustive grid enumeration with stabilization, randomized
sampling) plus the witness search for position-dependence of reachable types
with four pieces.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .boards import Board, lattice_points
from .geometry import (
    GeometryError,
    MoveSet,
    ORIGIN,
    Point,
    arrangement,
    configuration_arrangement,
    move_lines,
    parse_moves,
    region_representatives,
    region_sample_points,
)
from .signature import (
    AttackError,
    Config,
    LabelledType,
    UnlabelledType,
    canonical_unlabelled,
    labelled_type,
    orbit_size,
    type_from_dict,
    type_to_dict,
    _ray_order,
)


@dataclass(frozen=True)
class Census:
    """Set of unlabelled types found by one engine run."""

    ms: MoveSet
    q: int
    engine: str
    types: frozenset[UnlabelledType]
    exact: bool
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def r(self) -> int:
        return self.ms.r

    @property
    def size(self) -> int:
        return len(self.types)

    @property
    def labelled_count(self) -> int:
        return sum(orbit_size(t) for t in self.types)

    def type_keys(self) -> set[tuple[int, ...]]:
        return {t.canonical.key() for t in self.types}


@dataclass(frozen=True)
class StabilizationReport:
    sizes: tuple[tuple[int, int], ...]  # (n, census size) per order tried
    stabilized_at: int | None  # first n of the constant window, None if unstable
    window: int


# -- grid engine -------------------------------------------------------------

def _attack_masks(ms: MoveSet, cells: Sequence[tuple[int, int]]) -> list[int]:
    """Per-cell bitmask of attacked cells; cells sharing a move line attack."""
    masks = [0] * len(cells)
    for mv in ms.moves:
        groups: dict[int, list[int]] = {}
        for idx, (x, y) in enumerate(cells):
            groups.setdefault(mv.d * x - mv.c * y, []).append(idx)
        for group in groups.values():
            if len(group) < 2:
                continue
            gmask = 0
            for idx in group:
                gmask |= 1 << idx
            for idx in group:
                masks[idx] |= gmask & ~(1 << idx)
    return masks


def count_nonattacking(ms: MoveSet, board: Board, n: int, q: int) -> int:
    """Exact number of labelled nonattacking placements on the order-n board.

    Backtracks over cells in lexicographic order (each set counted once) and
    multiplies by q! at the end; the final piece is counted by popcount.
    """
    if q < 1 or n < 1:
        raise GeometryError("need q >= 1 and n >= 1")
    cells = lattice_points(board, n).cells
    if q == 1:
        return len(cells)
    masks = _attack_masks(ms, cells)

    def place(avail: int, depth: int) -> int:
        if depth == q - 1:
            return avail.bit_count()
        total = 0
        m = avail
        while m:
            low = m & -m
            idx = low.bit_length() - 1
            m ^= low
            total += place(avail & ~masks[idx] & ~((low << 1) - 1), depth + 1)
        return total

    sets = place((1 << len(cells)) - 1, 0)
    return sets * math.factorial(q)


def _cone_of_int(rays: Sequence[tuple[int, int]], dx: int, dy: int) -> int:
    # index of the cone containing integer direction (dx, dy); assumes the
    # direction is parallel to no ray (checked upstream by the attack masks)
    h = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
    count = 0
    for rx, ry in rays:
        rh = 0 if (ry > 0 or (ry == 0 and rx > 0)) else 1
        if rh < h or (rh == h and rx * dy - ry * dx > 0):
            count += 1
    return count if count >= 1 else len(rays)


def _keys_to_types(keys: Iterable[tuple[int, ...]], q: int, r: int) -> frozenset[UnlabelledType]:
    pairs = [(i, k) for i in range(1, q + 1) for k in range(1, q + 1) if i != k]
    out = set()
    for key in keys:
        entries = tuple((i, k, region) for (i, k), region in zip(pairs, key))
        out.add(canonical_unlabelled(LabelledType(q, r, entries)))
    return frozenset(out)


def grid_census(ms: MoveSet, board: Board, n: int, q: int) -> Census:
    """Types realized on the order-n lattice board (a lower bound for fixed n)."""
    if q < 1 or n < 1:
        raise GeometryError("need q >= 1 and n >= 1")
    cells = lattice_points(board, n).cells
    rays = [(m.c, m.d) for m in _ray_order(ms.moves)]
    pairs = [(i, k) for i in range(q) for k in range(q) if i != k]

    if q == 1:
        types = _keys_to_types([()] if cells else [], 1, ms.r)
        return Census(ms, q, "grid", types, False, {"n": n, "cells": len(cells)})

    masks = _attack_masks(ms, cells)
    # memoized cone lookup per relative displacement: board deltas repeat a lot
    cone_of: dict[tuple[int, int], int] = {}

    def cone(dx: int, dy: int) -> int:
        region = cone_of.get((dx, dy))
        if region is None:
            region = _cone_of_int(rays, dx, dy)
            cone_of[(dx, dy)] = region
        return region

    keys: set[tuple[int, ...]] = set()
    chosen: list[int] = []

    def place(avail: int, depth: int) -> None:
        m = avail
        while m:
            low = m & -m
            idx = low.bit_length() - 1
            m ^= low
            chosen.append(idx)
            if depth == q - 1:
                pts = [cells[c] for c in chosen]
                keys.add(tuple(
                    cone(pts[k][0] - pts[i][0], pts[k][1] - pts[i][1])
                    for i, k in pairs
                ))
            else:
                place(avail & ~masks[idx] & ~((low << 1) - 1), depth + 1)
            chosen.pop()

    place((1 << len(cells)) - 1, 0)
    types = _keys_to_types(keys, q, ms.r)
    return Census(ms, q, "grid", types, False, {"n": n, "cells": len(cells)})


def stabilized_census(
    ms: MoveSet,
    board: Board,
    q: int,
    n_start: int = 1,
    n_max: int = 24,
    window: int = 2,
    confirm_size: int | None = None,
) -> tuple[Census, StabilizationReport]:
    """Grid censuses for growing n until the type set holds still.

    Stops once the census is unchanged for `window` consecutive increments.
    The result is exact only when `confirm_size` (from an independent engine
    or closed form) matches; stabilization alone is heuristic.  When n_max is
    reached without stabilizing, the partial census is returned with
    stabilized_at = None.
    """
    if n_start > n_max or window < 1:
        raise GeometryError("need n_start <= n_max and window >= 1")
    sizes = []
    prev_types: frozenset[UnlabelledType] | None = None
    census = None
    held = 0
    stabilized_at = None
    for n in range(n_start, n_max + 1):
        census = grid_census(ms, board, n, q)
        sizes.append((n, census.size))
        # an empty census never counts as stable: the pieces simply do not fit yet
        if census.size > 0 and prev_types is not None and census.types == prev_types:
            held += 1
            if held >= window:
                stabilized_at = n - window
                break
        else:
            held = 0
        prev_types = census.types
    report = StabilizationReport(tuple(sizes), stabilized_at, window)
    exact = (
        stabilized_at is not None
        and confirm_size is not None
        and census.size == confirm_size
    )
    final = Census(
        ms, q, "grid", census.types, exact,
        {"n": sizes[-1][0], "stabilized_at": stabilized_at, "window": window,
         "stable": stabilized_at is not None},
    )
    return final, report


# -- geometric engine --------------------------------------------------------

def geometric_census(ms: MoveSet, q: int, refinement: int = 1) -> Census:
    """Recursive placement: piece 1 at the origin, each further piece at
    interior sample points of the current move-line arrangement's regions.

    Exact for q <= 3 (one representative per region suffices there); for
    q >= 4 the census is a lower bound that grows monotonically with
    `refinement` (extra sample points per region).
    """
    if q < 1 or refinement < 1:
        raise GeometryError("need q >= 1 and refinement >= 1")
    partials: list[tuple[Point, ...]] = [(ORIGIN,)]
    for _ in range(q - 1):
        extended = []
        for cfg in partials:
            arr = configuration_arrangement(ms, cfg)
            for pts in region_sample_points(arr, refinement).values():
                for p in pts:
                    extended.append(cfg + (p,))
        partials = extended
    keys = set()
    full_types = set()
    for cfg in partials:
        t = labelled_type(ms, Config(cfg))
        if t.key() not in keys:
            keys.add(t.key())
            full_types.add(canonical_unlabelled(t))
    return Census(
        ms, q, "geometric", frozenset(full_types), q <= 3,
        {"refinement": refinement, "placements": len(partials)},
    )


# -- random engine -----------------------------------------------------------

def random_census(ms: MoveSet, q: int, samples: int, seed: int = 0) -> Census:
    """Monte-Carlo lower bound: q rational points drawn from a large box.

    Deterministic for a fixed seed; attacking draws are skipped.  The result
    is always a subset of the true census.
    """
    if samples < 1:
        raise GeometryError("need samples >= 1")
    rng = random.Random(seed)
    keys = set()
    full_types = set()
    accepted = 0
    for _ in range(samples):
        pieces = tuple(
            Point(
                Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 997)),
                Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 997)),
            )
            for _ in range(q)
        )
        if len(set(pieces)) != q:
            continue
        cfg = Config(pieces)
        try:
            t = labelled_type(ms, cfg)
        except AttackError:
            continue
        accepted += 1
        if t.key() not in keys:
            keys.add(t.key())
            full_types.add(canonical_unlabelled(t))
    return Census(
        ms, q, "random", frozenset(full_types), False,
        {"samples": samples, "seed": seed, "nonattacking": accepted},
    )


# -- fours witness -----------------------------------------------------------

@dataclass(frozen=True)
class FoursWitness:
    """Two placements of the third piece inside one region whose reachable
    fourth-piece type sets differ."""

    p1: Point
    p2: Point
    p3_a: Point
    p3_b: Point
    region_signature: tuple
    differing_type: LabelledType
    evals: int


def _reachable_keys(ms: MoveSet, cfg3: tuple[Point, ...]) -> frozenset[tuple[int, ...]]:
    arr = configuration_arrangement(ms, cfg3)
    keys = set()
    for p4 in region_representatives(arr):
        t = labelled_type(ms, Config(cfg3 + (p4,)))
        keys.add(t.key())
    return frozenset(keys)


def fours_witness(
    ms: MoveSet,
    samples_per_region: int = 3,
    budget: int = 200,
) -> FoursWitness | None:
    """Search for position-dependence of fourth-piece types on the third
    piece's location within a fixed region.

    Pieces 1 and 2 are pinned (origin plus one representative per region of
    piece 1's arrangement); every region of their joint arrangement is probed
    at several interior points, and the sets of reachable labelled types for a
    fourth piece are compared.  `budget` caps the number of reachable-set
    evaluations.  Returns None when the budget finds no witness.
    """
    if ms.r < 1 or budget < 2:
        return None
    p1 = ORIGIN
    evals = 0
    for p2 in region_representatives(arrangement(move_lines(ms, p1))):
        arr12 = configuration_arrangement(ms, (p1, p2))
        for sig, pts in region_sample_points(arr12, samples_per_region).items():
            if len(pts) < 2:
                continue
            reach = []
            for p3 in pts:
                if evals >= budget:
                    return None
                reach.append((p3, _reachable_keys(ms, (p1, p2, p3))))
                evals += 1
            for (pa, ra), (pb, rb) in itertools.combinations(reach, 2):
                if ra != rb:
                    diff_key = sorted(ra.symmetric_difference(rb))[0]
                    kpairs = [(i, k) for i in range(1, 5) for k in range(1, 5) if i != k]
                    entries = tuple(
                        (i, k, region) for (i, k), region in zip(kpairs, diff_key)
                    )
                    return FoursWitness(
                        p1, p2, pa, pb, sig,
                        LabelledType(4, ms.r, entries), evals,
                    )
    return None


# -- serialization and cache -------------------------------------------------

def census_to_dict(census: Census) -> dict:
    types = sorted(census.types, key=lambda t: t.canonical.key())
    return {
        "engine": census.engine,
        "moves": str(census.ms),
        "q": census.q,
        "r": census.r,
        "exact": census.exact,
        "unlabelled": census.size,
        "labelled": census.labelled_count,
        "types": [type_to_dict(t.canonical) for t in types],
        "metadata": census.metadata,
    }


def census_from_dict(data: dict) -> Census:
    types = frozenset(
        canonical_unlabelled(type_from_dict(entry)) for entry in data["types"]
    )
    return Census(
        parse_moves(data["moves"]), int(data["q"]), data["engine"],
        types, bool(data["exact"]), dict(data.get("metadata", {})),
    )


def cache_key(kind: str, payload: dict) -> str:
    body = json.dumps({"kind": kind, **payload}, sort_keys=True)
    return hashlib.sha256(body.encode()).hexdigest()


def cache_load(cache_dir: str | Path | None, key: str) -> dict | None:
    if cache_dir is None:
        return None
    path = Path(cache_dir) / f"{key}.json"
    if not path.exists():
        return None
    return json.loads(path.read_text())


def cache_store(cache_dir: str | Path | None, key: str, data: dict) -> None:
    if cache_dir is None:
        return
    path = Path(cache_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / f"{key}.json").write_text(json.dumps(data, sort_keys=True))
