"""Measure computation for unions of axis-aligned boxes under product measures."""
from .box import Box, Rect, union_membership
from .cantor import cantor_box_measure, sample_cantor
from .cover import cover_residual, five_r_cover, scale_disjoint
from .montecarlo import mc_measure, sample_points
from .neighborhood import Affine, CantorPreimage, Point, Slab, neighborhood, slab_box_measure
from .spaces import AmbientSpace, CantorSpec, FactorSpace
from .sweep import (MeasureEstimate, combine_measure, difference_measure, grid_measure,
                    intersection_measure, union_measure)
