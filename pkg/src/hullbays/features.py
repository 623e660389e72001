"""The 125-element bay feature vector and its delimited file format.

Layout (``LAYOUT_VERSION``): five blocks of 25, in the order global,
top-left, top-right, bottom-left, bottom-right.  Inside a block the four scan
directions come in the order left, right, top, bottom with their six
features f1..f6 each, followed by the hull perimeter contact count.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .deficiency import (
    DIRECTIONS,
    DeficiencyMap,
    as_binary,
    build_deficiency_map,
    perimeter_contact_count,
    scan_direction,
)
from .errors import DegenerateHull, EmptyImage, LayoutVersionMismatch
from .geometry import polygon_centroid

LAYOUT_VERSION = "hull125.v1"
BLOCK_SIZE = 25
N_FEATURES = 125
BLOCKS = ("global", "tl", "tr", "bl", "br")
FEATURE_NAMES = ("max_dcp", "n_pos", "avg_dcp", "mean_line", "n_zero", "n_bays")

COLUMN_NAMES = tuple(
    name
    for block in BLOCKS
    for name in (
        [f"{block}.{d}.{f}" for d in DIRECTIONS for f in FEATURE_NAMES]
        + [f"{block}.perimeter"]
    )
)


def block_from_map(dmap: DeficiencyMap) -> np.ndarray:
    out = np.zeros(BLOCK_SIZE)
    for i, direction in enumerate(DIRECTIONS):
        out[6 * i : 6 * i + 6] = scan_direction(dmap, direction).as_tuple()
    out[24] = perimeter_contact_count(dmap)
    return out


def extract_global_block(img) -> np.ndarray:
    """25 features of one image; zeros when its hull is degenerate or empty."""
    try:
        dmap = build_deficiency_map(img)
    except (DegenerateHull, EmptyImage):
        return np.zeros(BLOCK_SIZE)
    return block_from_map(dmap)


def split_quadrants(img, centroid: tuple[float, float]) -> tuple[np.ndarray, ...]:
    """Split around ``centroid`` into (top-left, top-right, bottom-left, bottom-right).

    Column ``x`` goes right when ``x >= ceil(c_x)``, row ``y`` goes down when
    ``y >= ceil(c_y)``.  Sub-images keep the full frame with the other
    quadrants' pixels cleared.
    """
    obj = as_binary(img)
    cx = math.ceil(centroid[0])
    cy = math.ceil(centroid[1])
    ys, xs = np.indices(obj.shape)
    right = xs >= cx
    below = ys >= cy
    return tuple(
        obj & mask
        for mask in (~right & ~below, right & ~below, ~right & below, right & below)
    )


def extract_feature_vector(img) -> np.ndarray:
    """Global block followed by the four centroid-quadrant blocks.

    Raises:
        EmptyImage: the image has no object pixels.
    """
    obj = as_binary(img)
    if not obj.any():
        raise EmptyImage("image has no object pixels")
    out = np.zeros(N_FEATURES)
    try:
        dmap = build_deficiency_map(obj)
    except DegenerateHull:
        return out
    out[:BLOCK_SIZE] = block_from_map(dmap)
    centroid = polygon_centroid(dmap.hull)
    for i, quadrant in enumerate(split_quadrants(obj, centroid), start=1):
        out[BLOCK_SIZE * i : BLOCK_SIZE * (i + 1)] = extract_global_block(quadrant)
    return out


def _fmt(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def write_feature_matrix(path, labels, features) -> None:
    """Write ``label, f1..f125`` rows; the header's first cell carries the layout tag."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != N_FEATURES:
        raise ValueError(f"expected (n, {N_FEATURES}) features, got {features.shape}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"label:{LAYOUT_VERSION}", *COLUMN_NAMES])
        for label, row in zip(labels, features):
            w.writerow([int(label), *map(_fmt, row)])


def read_feature_matrix(path) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(labels, features)``.

    Raises:
        LayoutVersionMismatch: header missing or tagged with another layout.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = f"label:{LAYOUT_VERSION}"
        if not header or header[0] != expected or len(header) != N_FEATURES + 1:
            found = header[0] if header else "<empty file>"
            raise LayoutVersionMismatch(
                f"{path}: expected layout {expected!r}, found {found!r}"
            )
        rows = [r for r in reader if r]
    if not rows:
        return np.zeros(0, dtype=int), np.zeros((0, N_FEATURES))
    data = np.array(rows, dtype=float)
    return data[:, 0].astype(int), data[:, 1:]
