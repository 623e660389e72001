import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hullbays.deficiency import (
    BACKGROUND,
    DEFICIENCY,
    DIRECTIONS,
    OBJECT,
    build_deficiency_map,
    dcp_profile,
    perimeter_contact_count,
    raster_line,
    scan_direction,
)
from hullbays.errors import DegenerateHull, EmptyImage

from oracles import dcp_table, digital_segment, features_from_table, pixel_labels, random_blob


def pic(rows):
    return np.array([[c == "#" for c in r] for r in rows])


C7 = pic([
    ".#####.",
    ".#.....",
    ".#.....",
    ".#.....",
    ".#.....",
    ".#.....",
    ".#####.",
])

seeds = st.integers(0, 2**32 - 1)


def blob(seed, size=16):
    return random_blob(np.random.default_rng(seed), size)


def dmap_or_none(img):
    try:
        return build_deficiency_map(img)
    except (DegenerateHull, EmptyImage):
        return None


# -- labelling -------------------------------------------------------------


def test_solid_square_has_no_deficiency():
    dmap = build_deficiency_map(np.ones((5, 5), bool))
    assert not dmap.deficiency_mask.any()
    assert dmap.object_mask.all()


def test_c_shape_cavity_matches_oracle():
    img = pic([
        "#####",
        "#....",
        "#....",
        "#....",
        "#####",
    ])
    dmap = build_deficiency_map(img)
    labels, _ = pixel_labels(img)
    np.testing.assert_array_equal(dmap.labels, labels)
    assert dmap.deficiency_mask.sum() == 12


def test_ring_centre_is_a_lake():
    img = pic(["###", "#.#", "###"])
    dmap = build_deficiency_map(img)
    assert dmap.labels[1, 1] == DEFICIENCY
    assert dmap.deficiency_mask.sum() == 1


def test_errors():
    with pytest.raises(EmptyImage):
        build_deficiency_map(np.zeros((4, 4), bool))
    with pytest.raises(DegenerateHull):
        build_deficiency_map(pic(["#..", ".#.", "..#"]))


@given(seeds)
def test_labels_match_oracle_and_partition(seed):
    img = blob(seed)
    dmap = dmap_or_none(img)
    if dmap is None:
        return
    labels, _ = pixel_labels(img)
    np.testing.assert_array_equal(dmap.labels, labels)
    assert set(np.unique(dmap.labels)) <= {BACKGROUND, OBJECT, DEFICIENCY}
    np.testing.assert_array_equal(dmap.object_mask, img)


# -- scans -----------------------------------------------------------------


def test_solid_square_scans():
    dmap = build_deficiency_map(np.pad(np.ones((6, 6), bool), 2))
    for d in DIRECTIONS:
        assert scan_direction(dmap, d).as_tuple() == (0, 0, 0, 0, 6, 0)


def test_c7_hand_table():
    dmap = build_deficiency_map(C7)
    lines, dcp = dcp_profile(dmap, "right")
    # rows 0 and 6 hit the bars at the hull edge, rows 1-5 cross the cavity
    assert dict(zip(lines.tolist(), dcp.tolist())) == {0: 0, 1: 4, 2: 4, 3: 4, 4: 4, 5: 4, 6: 0}
    assert scan_direction(dmap, "right").as_tuple() == (4, 5, 4.0, 3.0, 2, 1)
    assert scan_direction(dmap, "left").as_tuple() == (0, 0, 0, 0, 7, 0)
    assert scan_direction(dmap, "top").as_tuple() == (0, 0, 0, 0, 5, 0)
    assert scan_direction(dmap, "bottom").as_tuple() == (0, 0, 0, 0, 5, 0)
    assert perimeter_contact_count(dmap) == 15


def test_line_without_object_gets_full_chord():
    img = pic([
        "#...#",
        ".....",
        "#...#",
    ])
    dmap = build_deficiency_map(img)
    lines, dcp = dcp_profile(dmap, "left")
    assert dict(zip(lines.tolist(), dcp.tolist())) == {0: 0, 1: 5, 2: 0}
    # columns 1-3 hold no object pixel: their whole 3-cell chord counts
    assert scan_direction(dmap, "top").as_tuple() == (3, 3, 3.0, 2.0, 2, 1)


@given(seeds)
def test_scans_match_per_line_oracle(seed):
    img = blob(seed)
    dmap = dmap_or_none(img)
    if dmap is None:
        return
    labels, _ = pixel_labels(img)
    for d in DIRECTIONS:
        expected = features_from_table(dcp_table(labels, d))
        assert scan_direction(dmap, d).as_tuple() == pytest.approx(expected, abs=1e-12)


@given(seeds)
def test_scan_invariants(seed):
    img = blob(seed)
    dmap = dmap_or_none(img)
    if dmap is None:
        return
    feats = {d: scan_direction(dmap, d) for d in DIRECTIONS}
    for d, f in feats.items():
        assert f.f1_max_dcp >= 0
        assert f.f3_avg_dcp <= f.f1_max_dcp
        assert f.f6_bay_count <= f.f2_count_positive
        _, dcp = dcp_profile(dmap, d)
        assert dcp.max() <= max(img.shape)
    assert feats["left"].f2_count_positive + feats["left"].f5_count_zero == (
        feats["right"].f2_count_positive + feats["right"].f5_count_zero
    )
    assert feats["top"].f2_count_positive + feats["top"].f5_count_zero == (
        feats["bottom"].f2_count_positive + feats["bottom"].f5_count_zero
    )


def reflect_f4(t, size):
    f1, f2, f3, f4, f5, f6 = t
    return (f1, f2, f3, size - 1 - f4 if f2 else 0.0, f5, f6)


@given(seeds)
def test_mirror_symmetry(seed):
    img = blob(seed)
    dmap = dmap_or_none(img)
    if dmap is None:
        return
    h, w = img.shape
    lr = build_deficiency_map(img[:, ::-1])
    ud = build_deficiency_map(img[::-1, :])
    scan = lambda m, d: scan_direction(m, d).as_tuple()
    # left-right mirror: rows keep their index, columns are reflected
    assert scan(lr, "left") == scan(dmap, "right")
    assert scan(lr, "right") == scan(dmap, "left")
    assert scan(lr, "top") == pytest.approx(reflect_f4(scan(dmap, "top"), w))
    assert scan(lr, "bottom") == pytest.approx(reflect_f4(scan(dmap, "bottom"), w))
    # up-down mirror
    assert scan(ud, "top") == scan(dmap, "bottom")
    assert scan(ud, "bottom") == scan(dmap, "top")
    assert scan(ud, "left") == pytest.approx(reflect_f4(scan(dmap, "left"), h))


@given(seeds, st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_padding_shifts_only_f4(seed, top, bottom, left, right):
    img = blob(seed, 12)
    dmap = dmap_or_none(img)
    if dmap is None:
        return
    padded = build_deficiency_map(np.pad(img, ((top, bottom), (left, right))))
    for d in DIRECTIONS:
        a = scan_direction(dmap, d).as_tuple()
        b = scan_direction(padded, d).as_tuple()
        shift = top if d in ("left", "right") else left
        assert b == pytest.approx(a[:3] + ((a[3] + shift) if a[1] else 0.0,) + a[4:])
    assert perimeter_contact_count(padded) == perimeter_contact_count(dmap)


@given(seeds)
def test_convex_solid_null(seed):
    dmap = dmap_or_none(blob(seed))
    if dmap is None:
        return
    solid = build_deficiency_map(dmap.inside)
    assert not solid.deficiency_mask.any()
    for d in DIRECTIONS:
        f = scan_direction(solid, d)
        assert (f.f1_max_dcp, f.f2_count_positive, f.f3_avg_dcp, f.f4_mean_scanline, f.f6_bay_count) == (0, 0, 0, 0, 0)


# -- boundary raster and perimeter feature ---------------------------------


def test_raster_line_matches_rounding_oracle():
    for a, b in itertools.product(itertools.product(range(-6, 7), repeat=2), repeat=2):
        pixels = list(raster_line(a, b))
        assert set(pixels) == digital_segment(a, b)
        assert len(pixels) == max(abs(a[0] - b[0]), abs(a[1] - b[1])) + 1
        assert list(raster_line(b, a)) == pixels


def test_perimeter_of_solid_square():
    dmap = build_deficiency_map(np.pad(np.ones((6, 6), bool), 1))
    assert len(dmap.hull_boundary_pixels) == 20
    assert perimeter_contact_count(dmap) == 20


def test_perimeter_of_plus_sign():
    img = pic([".#.", "###", ".#."])
    dmap = build_deficiency_map(img)
    assert set(dmap.hull_boundary_pixels) == {(1, 0), (2, 1), (1, 2), (0, 1)}
    assert perimeter_contact_count(dmap) == 4
    assert not dmap.deficiency_mask.any()


def oracle_perimeter(img):
    _, polygon = pixel_labels(img)
    ring = set()
    for i in range(len(polygon)):
        ring |= digital_segment(polygon[i], polygon[(i + 1) % len(polygon)])
    return sum(1 for x, y in ring if img[y, x])


def test_extra_corner_pixel_changes_only_its_edges():
    img = np.zeros((12, 12), bool)
    img[2:7, 2:7] = True
    base = build_deficiency_map(img)
    assert perimeter_contact_count(base) == oracle_perimeter(img) == 16
    img[10, 10] = True
    grown = build_deficiency_map(img)
    # the new hull keeps the top and left sides of the square (9 pixels,
    # corner shared); the two edges through the new corner touch the object
    # only at their endpoints, which adds the new pixel itself
    assert perimeter_contact_count(grown) == oracle_perimeter(img) == 9 + 1


@given(seeds)
def test_perimeter_matches_oracle(seed):
    img = blob(seed)
    if dmap_or_none(img) is None:
        return
    assert perimeter_contact_count(build_deficiency_map(img)) == oracle_perimeter(img)


def test_render_legend():
    text = build_deficiency_map(C7).render()
    rows = text.splitlines()
    assert len(rows) == 7 and all(len(r) == 7 for r in rows)
    assert rows[0] == "0111110"
    assert rows[3] == "01+++10"
    assert set(text) <= set("012+\n")
