"""Convex hulls of integer point sets, with polygon area and centroid.

Points are ``(x, y)`` pairs where ``x`` is the column and ``y`` the row of a
pixel.  Orientation tests use the ordinary cross product
``(b - a) x (c - a)``; a hull is returned with every turn strictly positive,
which is also the orientation that makes the shoelace area positive.
"""

from __future__ import annotations

import enum
import functools
import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateHull, ZeroArea


class GridPoint(NamedTuple):
    x: int
    y: int


Hull = tuple  # tuple[GridPoint, ...], first vertex is the anchor


class Location(enum.Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


def cross(o: Sequence[int], a: Sequence[int], b: Sequence[int]) -> int:
    """Twice the signed area of triangle ``o, a, b``; > 0 when ``b`` is left of ``o -> a``."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def anchor_point(points: Iterable[Sequence[int]]) -> GridPoint:
    """Rightmost of the lowest points: minimum y, ties to maximum x."""
    x, y = min(points, key=lambda p: (p[1], -p[0]))
    return GridPoint(int(x), int(y))


def _angular_order(directions: list[tuple[int, int]]) -> list[tuple[int, int]]:
    # All directions lie in the half-open upper half plane seen from the
    # anchor, so a float atan2 sort is verified (and if needed redone) with
    # exact integer cross products.
    directions.sort(key=lambda d: math.atan2(d[1], d[0]))
    for u, v in zip(directions, directions[1:]):
        if u[0] * v[1] - u[1] * v[0] <= 0:
            directions.sort(
                key=functools.cmp_to_key(lambda a, b: b[0] * a[1] - b[1] * a[0])
            )
            break
    return directions


def graham_scan(points: Iterable[Sequence[int]]) -> Hull:
    """Convex hull of an integer point set by Graham's scan.

    The scan is anchored at the rightmost lowest point, the remaining points
    are sorted by angle about it, and of several points sharing one angle only
    the farthest is kept.  The result starts at the anchor, turns strictly
    left at every vertex and contains no collinear vertices.

    Raises:
        DegenerateHull: fewer than three distinct points, or all collinear.
    """
    if isinstance(points, np.ndarray):
        pts = set(map(tuple, points.tolist()))
    else:
        pts = {(int(p[0]), int(p[1])) for p in points}
    if len(pts) < 3:
        raise DegenerateHull(f"need at least 3 distinct points, got {len(pts)}")
    ax, ay = anchor = min(pts, key=lambda p: (p[1], -p[0]))

    farthest: dict[tuple[int, int], tuple[int, tuple[int, int]]] = {}
    for x, y in pts:
        dx, dy = x - ax, y - ay
        if dx == 0 and dy == 0:
            continue
        g = math.gcd(dx, dy)
        key = (dx // g, dy // g)
        best = farthest.get(key)
        if best is None or g > best[0]:
            farthest[key] = (g, (x, y))
    if len(farthest) < 2:
        raise DegenerateHull("all points are collinear")

    ordered = [farthest[d][1] for d in _angular_order(list(farthest))]
    stack = [anchor, ordered[0]]
    for px, py in ordered[1:]:
        while True:
            (x0, y0), (x1, y1) = stack[-2], stack[-1]
            if (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0) > 0:
                stack.append((px, py))
                break
            stack.pop()
    return tuple(map(GridPoint._make, stack))


def polygon_area(hull: Sequence[Sequence[float]]) -> float:
    """Shoelace area; positive for the orientation produced by :func:`graham_scan`."""
    total = 0
    n = len(hull)
    for i in range(n):
        x0, y0 = hull[i]
        x1, y1 = hull[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total / 2.0


def polygon_centroid(hull: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Area centroid ``(c_x, c_y)`` of a simple polygon."""
    n = len(hull)
    twice_area = 0
    sx = 0
    sy = 0
    for i in range(n):
        x0, y0 = hull[i]
        x1, y1 = hull[(i + 1) % n]
        c = x0 * y1 - x1 * y0
        twice_area += c
        sx += (x0 + x1) * c
        sy += (y0 + y1) * c
    if twice_area == 0:
        raise ZeroArea("polygon has zero area")
    # sum / (6A) with 2A accumulated
    return sx / (3.0 * twice_area), sy / (3.0 * twice_area)


def point_in_polygon(p: Sequence[int], hull: Sequence[Sequence[int]]) -> Location:
    """Classify ``p`` against a convex hull using exact integer edge tests."""
    n = len(hull)
    on_edge = False
    for i in range(n):
        c = cross(hull[i], hull[(i + 1) % n], p)
        if c < 0:
            return Location.OUTSIDE
        if c == 0:
            on_edge = True
    return Location.ON_BOUNDARY if on_edge else Location.INSIDE


def hull_mask(hull: Sequence[Sequence[int]], height: int, width: int) -> np.ndarray:
    """Boolean ``(height, width)`` mask of pixels inside or on the hull.

    Vectorised form of :func:`point_in_polygon` over the pixel grid; pixel
    ``(row, col)`` is the point ``(x=col, y=row)``.
    """
    ys, xs = np.mgrid[0:height, 0:width]
    mask = np.ones((height, width), dtype=bool)
    n = len(hull)
    for i in range(n):
        ox, oy = hull[i]
        ax, ay = hull[(i + 1) % n]
        mask &= (ax - ox) * (ys - oy) - (ay - oy) * (xs - ox) >= 0
    return mask
