"""Convex polygonal boards and lattice-point enumeration.

A board of order n holds pieces on the integer points strictly inside the
(n+1)-fold dilation of the polygon; for the unit square that is exactly the
usual n x n grid {1..n}^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import GeometryError, Point, parse_rational, point


@dataclass(frozen=True)
class Board:
    """Strictly convex polygon, vertices in counterclockwise order."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        n = len(self.vertices)
        if n < 3:
            raise GeometryError("a board needs at least 3 vertices")
        if len(set(self.vertices)) != n:
            raise GeometryError("board vertices must be distinct")
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            c = self.vertices[(i + 2) % n]
            cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
            if cross <= 0:
                raise GeometryError(
                    "board must be strictly convex with counterclockwise vertices"
                )


SQUARE = Board((point(0, 0), point(1, 0), point(1, 1), point(0, 1)))
TRIANGLE = Board((point(0, 0), point(1, 0), point(0, 1)))

NAMED_BOARDS = {"square": SQUARE, "triangle": TRIANGLE}


def contains_open(board: Board, scale: int, p: Point) -> bool:
    """True iff p lies strictly inside scale * board (all edge tests strict)."""
    n = len(board.vertices)
    for i in range(n):
        a = board.vertices[i]
        b = board.vertices[(i + 1) % n]
        # interior of a ccw polygon is strictly left of each directed edge
        cross = (b.x - a.x) * (p.y - scale * a.y) - (b.y - a.y) * (p.x - scale * a.x)
        if cross <= 0:
            return False
    return True


@dataclass(frozen=True)
class LatticeBoard:
    board: Board
    n: int
    cells: tuple[tuple[int, int], ...]


def lattice_points(board: Board, n: int) -> LatticeBoard:
    """Integer points strictly inside (n+1) * board, in lexicographic order."""
    if n < 1:
        raise GeometryError("board order n must be >= 1")
    scale = n + 1
    min_x = min(v.x for v in board.vertices) * scale
    max_x = max(v.x for v in board.vertices) * scale
    min_y = min(v.y for v in board.vertices) * scale
    max_y = max(v.y for v in board.vertices) * scale
    cells = []
    for x in range(math.floor(min_x), math.ceil(max_x) + 1):
        for y in range(math.floor(min_y), math.ceil(max_y) + 1):
            if contains_open(board, scale, Point(Fraction(x), Fraction(y))):
                cells.append((x, y))
    return LatticeBoard(board, n, tuple(cells))


def parse_board(text: str) -> Board:
    """Board spec: `square`, `triangle`, or `poly:x1,y1;x2,y2;...`."""
    text = text.strip()
    if text in NAMED_BOARDS:
        return NAMED_BOARDS[text]
    if text.startswith("poly:"):
        vertices = []
        for part in text[len("poly:"):].split(";"):
            coords = part.strip().split(",")
            if len(coords) != 2:
                raise GeometryError(f"bad board vertex {part!r}")
            vertices.append(Point(parse_rational(coords[0]), parse_rational(coords[1])))
        return Board(tuple(vertices))
    raise GeometryError(f"unknown board spec {text!r}")
