"""Convex-hull bay features for handwritten digits and an MLP classifier."""

from .deficiency import DeficiencyMap, DirectionalBayFeatures, build_deficiency_map, perimeter_contact_count, scan_direction
from .features import LAYOUT_VERSION, extract_feature_vector, extract_global_block, split_quadrants
from .geometry import GridPoint, Location, graham_scan, point_in_polygon, polygon_area, polygon_centroid

__version__ = "0.1.0"
