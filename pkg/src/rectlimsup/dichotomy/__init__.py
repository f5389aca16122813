"""Series diagnostics, the sets E_n, the Chung-Erdos ratio and hit statistics."""
from .chung_erdos import ChungErdosReport, chung_erdos_bound
from .hits import HitHistogram, hit_statistics, level_hits
from .levelset import LevelSet, build_level_set, half_ball, hyperplane_points
from .series import SeriesReport, application_series, classify, report_from_terms, theorem_series
