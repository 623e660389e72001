"""Convex deficiency of a binary pattern and the directional bay scans.

A :class:`DeficiencyMap` labels every pixel as object, deficiency (inside or
on the hull but not object; bays and lakes together) or background.  Scanning
the map from one image side yields a :class:`DirectionalBayFeatures` block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import EmptyImage
from .geometry import GridPoint, Hull, graham_scan, hull_mask

BACKGROUND = 0
OBJECT = 1
DEFICIENCY = 2

DIRECTIONS = ("left", "right", "top", "bottom")


def as_binary(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {arr.shape}")
    return arr.astype(bool)


def row_extremes(obj: np.ndarray) -> list[tuple[int, int]]:
    """Leftmost and rightmost object pixel of every row, as ``(x, y)``.

    Every hull vertex of the object pixels is among these points.
    """
    rows = np.flatnonzero(obj.any(axis=1))
    first = obj[rows].argmax(axis=1)
    last = obj.shape[1] - 1 - obj[rows, ::-1].argmax(axis=1)
    pts = [(int(x), int(y)) for x, y in zip(first, rows)]
    pts += [(int(x), int(y)) for x, y in zip(last, rows)]
    return pts


def raster_line(a: tuple[int, int], b: tuple[int, int]) -> Iterator[GridPoint]:
    """Integer midpoint (Bresenham) line from ``a`` to ``b`` inclusive.

    Endpoints are put in lexicographic order first so an edge rasterises the
    same way whichever direction it is traversed.  Along the major axis every
    step yields one pixel whose minor coordinate is the exact line position
    rounded to nearest, halves rounded away from the start point.
    """
    (x0, y0), (x1, y1) = sorted((tuple(a), tuple(b)))
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        yield GridPoint(x0, y0)
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def hull_boundary_pixels(hull: Hull) -> frozenset:
    pixels = set()
    n = len(hull)
    for i in range(n):
        pixels.update(raster_line(hull[i], hull[(i + 1) % n]))
    return frozenset(pixels)


@dataclass(frozen=True)
class DeficiencyMap:
    labels: np.ndarray
    hull: Hull
    hull_boundary_pixels: frozenset
    inside: np.ndarray

    @property
    def object_mask(self) -> np.ndarray:
        return self.labels == OBJECT

    @property
    def deficiency_mask(self) -> np.ndarray:
        return self.labels == DEFICIENCY

    def render(self) -> str:
        """Text dump: '1' hull boundary, '2' object, '+' deficiency, '0' background."""
        chars = np.array(["0", "2", "+"])[self.labels]
        for x, y in self.hull_boundary_pixels:
            chars[y, x] = "1"
        return "\n".join("".join(row) for row in chars)


def build_deficiency_map(img) -> DeficiencyMap:
    """Hull the object pixels of ``img`` and label every pixel.

    Raises:
        EmptyImage: no object pixels.
        DegenerateHull: fewer than three object pixels, or all collinear.
    """
    obj = as_binary(img)
    if not obj.any():
        raise EmptyImage("image has no object pixels")
    hull = graham_scan(row_extremes(obj))
    inside = hull_mask(hull, *obj.shape)
    labels = np.full(obj.shape, BACKGROUND, dtype=np.int8)
    labels[inside] = DEFICIENCY
    labels[obj] = OBJECT
    labels.setflags(write=False)
    inside.setflags(write=False)
    return DeficiencyMap(labels, hull, hull_boundary_pixels(hull), inside)


@dataclass(frozen=True)
class DirectionalBayFeatures:
    f1_max_dcp: float
    f2_count_positive: int
    f3_avg_dcp: float
    f4_mean_scanline: float
    f5_count_zero: int
    f6_bay_count: int

    def as_tuple(self) -> tuple:
        return (
            self.f1_max_dcp,
            self.f2_count_positive,
            self.f3_avg_dcp,
            self.f4_mean_scanline,
            self.f5_count_zero,
            self.f6_bay_count,
        )


def _oriented(a: np.ndarray, direction: str) -> np.ndarray:
    # Scan lines become rows, scanning runs along increasing column.
    if direction == "left":
        return a
    if direction == "right":
        return a[:, ::-1]
    if direction == "top":
        return a.T
    if direction == "bottom":
        return a.T[:, ::-1]
    raise ValueError(f"unknown direction {direction!r}")


def dcp_profile(dmap: DeficiencyMap, direction: str) -> tuple[np.ndarray, np.ndarray]:
    """Scan-line indices that cross the hull and their d_cp values.

    d_cp counts the cells from the first hull cell to the first object cell
    on the line; a line crossing the hull without object cells gets its full
    chord length.
    """
    inside = _oriented(dmap.inside, direction)
    obj = _oriented(dmap.labels == OBJECT, direction)
    lines = np.flatnonzero(inside.any(axis=1))
    inside = inside[lines]
    obj = obj[lines]
    entry = inside.argmax(axis=1)
    has_obj = obj.any(axis=1)
    dcp = np.where(has_obj, obj.argmax(axis=1) - entry, inside.sum(axis=1))
    return lines, dcp


def scan_direction(dmap: DeficiencyMap, direction: str) -> DirectionalBayFeatures:
    lines, dcp = dcp_profile(dmap, direction)
    positive = dcp > 0
    n_pos = int(positive.sum())
    if n_pos == 0:
        return DirectionalBayFeatures(0, 0, 0.0, 0.0, int(len(dcp)), 0)
    runs = int(positive[0]) + int(np.count_nonzero(positive[1:] & ~positive[:-1]))
    return DirectionalBayFeatures(
        f1_max_dcp=int(dcp.max()),
        f2_count_positive=n_pos,
        f3_avg_dcp=float(dcp[positive].mean()),
        f4_mean_scanline=float(lines[positive].mean()),
        f5_count_zero=int(len(dcp) - n_pos),
        f6_bay_count=runs,
    )


def perimeter_contact_count(dmap: DeficiencyMap) -> int:
    """Rasterised hull-boundary pixels that are also object pixels."""
    labels = dmap.labels
    return sum(1 for x, y in dmap.hull_boundary_pixels if labels[y, x] == OBJECT)
