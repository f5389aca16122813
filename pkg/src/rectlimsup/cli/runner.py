"""Dispatch a validated ExperimentConfig to the library and collect tables."""
from __future__ import annotations

import platform
import time
from dataclasses import dataclass, field

from .. import __version__
from ..boxgeom.box import Box, union_membership
from ..boxgeom.montecarlo import mc_measure
from ..boxgeom.neighborhood import Affine, Point
from ..boxgeom.spaces import AmbientSpace
from ..boxgeom.sweep import union_measure
from ..dichotomy import application_series, build_level_set, chung_erdos_bound, hit_statistics, theorem_series
from ..exceptions import ValidationError
from ..systems import LevelScheme, LinearFormsSystem, RationalSystem, ShrinkingSystem, make_rates, sanitize_rates
from ..ubiquity import default_balls, kappa_scaling_probe, verify_ubiquity
from .config import ExperimentConfig, parse_number

SANITIZE_KIND = {"rational": "simultaneous", "linear_forms": "linear_forms", "shrinking": "shrinking"}


@dataclass
class Table:
    columns: tuple
    rows: list


@dataclass
class ReportBundle:
    tables: dict = field(default_factory=dict)
    summaries: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.tables and not self.summaries


def build_family(cfg: ExperimentConfig):
    if cfg.kind == "rational":
        return RationalSystem(cfg.d, LevelScheme(cfg.scheme or "geometric", cfg.M))
    if cfg.kind == "linear_forms":
        Phi = cfg.Phi if len(cfg.Phi) > 1 else cfg.Phi * cfg.h
        return LinearFormsSystem(cfg.d, cfg.h, Phi, M=cfg.M, p_range=cfg.p_range)
    return ShrinkingSystem(cfg.bases, cfg.digits, cfg.x_o or None)


def build_rates(cfg: ExperimentConfig, family, levels):
    phi = cfg.phi if len(cfg.phi) > 1 else cfg.phi * cfg.d
    san = sanitize_rates(SANITIZE_KIND[cfg.kind], phi, Phi=cfg.Phi or None, d=cfg.d,
                         h=cfg.h if cfg.kind == "linear_forms" else None, M=cfg.M, epsilon=cfg.epsilon,
                         u_max=cfg.u_max, bases=cfg.bases or None)
    return san, make_rates(san, M=cfg.M, levels=levels, scheme=family.scheme)


def parse_boxes(text: str) -> list:
    """"lo:hi; lo:hi" with comma-separated coordinates, e.g. "0,0:1/2,1/2; 1/4:3/4"."""
    out = []
    for part in text.split(";"):
        if not part.strip():
            continue
        if ":" not in part:
            raise ValidationError(("boxes", f"box {part.strip()!r} must be written lo:hi"))
        lo, hi = part.split(":", 1)
        out.append(Box(tuple(parse_number(x) for x in lo.split(",")), tuple(parse_number(x) for x in hi.split(","))))
    return out


def resolve_balls(cfg: ExperimentConfig, space: AmbientSpace, full_default: bool = False) -> list:
    if cfg.balls == "full" or (cfg.balls == "default" and full_default):
        return [Box.unit(space.dim)]
    if cfg.balls == "default":
        # the ball set is part of the experiment definition, not of the sampling seed
        return default_balls(space, cfg.ball_count, cfg.ball_level, seed=0, include_full=True)
    return parse_boxes(cfg.balls)


def _ball_text(b: Box) -> str:
    return ",".join(str(x) for x in b.lo) + ":" + ",".join(str(x) for x in b.hi)


def run_ubiquity(cfg, bundle):
    fam = build_family(cfg)
    _, rates = build_rates(cfg, fam, cfg.levels)
    balls = resolve_balls(cfg, fam.space)
    rep = verify_ubiquity(fam, rates, balls, cfg.levels, samples=cfg.samples, seed=cfg.seed, method=cfg.method,
                          cap=cfg.cap, workers=cfg.workers)
    bundle.tables["ubiquity"] = Table(("ball_id", "n", "ratio", "method", "error"), rep.rows())
    bundle.summaries["ubiquity"] = {
        "min_ratio": rep.min_ratio, "flagged_balls": rep.flagged, "methods": sorted(rep.methods),
        "balls": [_ball_text(b) for b in balls],
        "tail_min": {str(b): {str(n): v for n, v in d.items()} for b, d in rep.tail_min.items()},
        "seed": cfg.seed, "samples": cfg.samples, "notes": list(getattr(fam, "notes", [])),
    }


def run_series(cfg, bundle):
    fam = build_family(cfg)
    if cfg.series == "theorem":
        _, rates = build_rates(cfg, fam, cfg.levels)
        rep = theorem_series(rates, fam.space, cfg.N)
    else:
        phi = cfg.phi if len(cfg.phi) > 1 else cfg.phi * cfg.d
        deltas = [f.delta for f in fam.space.factors] if cfg.kind == "shrinking" else None
        Phi = (cfg.Phi if len(cfg.Phi) > 1 else cfg.Phi * cfg.h) if cfg.Phi else None
        rep = application_series(SANITIZE_KIND[cfg.kind], phi, Phi, cfg.Q, d=cfg.d,
                                 h=cfg.h if Phi else None, deltas=deltas, M=cfg.M)
    bundle.tables["series"] = Table(("N", "partial_sum", "last_term"), rep.rows())
    if rep.comparison is not None:
        bundle.tables["series_comparison"] = Table(("t", "partial_sum", "last_term"), rep.comparison.rows())
    bundle.summaries["series"] = {"kind": cfg.series, "total": rep.total, "label": rep.label, "slope": rep.slope,
                                  "note": rep.note}


def run_chung_erdos(cfg, bundle):
    fam = build_family(cfg)
    _, rates = build_rates(cfg, fam, cfg.levels)
    ball = resolve_balls(cfg, fam.space, full_default=True)[0]
    sets = [build_level_set(fam, rates, ball, n, cap=cfg.cap) for n in cfg.levels]
    rep = chung_erdos_bound(sets, fam.space)
    bundle.tables["chung_erdos"] = Table(("N", "sum_measure", "ratio"), rep.rows())
    bundle.tables["chung_erdos_levels"] = Table(
        ("n", "kept_centers", "shrunk_rectangles", "measure"),
        [(s.n, len(s.big), sum(len(x) for x in s.shrunk), float(m)) for s, m in zip(sets, rep.measures)])
    bundle.summaries["chung_erdos"] = {"ratio": rep.ratio, "sum_measure": rep.sum_measures, "ball": _ball_text(ball),
                                       "notes": rep.notes}


def run_hits(cfg, bundle):
    fam = build_family(cfg)
    levels = sorted({n for N in cfg.windows for n in range(N, 2 * N + 1)})
    _, rates = build_rates(cfg, fam, levels)
    H = hit_statistics(fam, rates, levels, samples=cfg.samples, seed=cfg.seed, cap=10 ** 10)
    bundle.tables["hits"] = Table(("window_lo", "window_hi", "k", "fraction"), H.rows(cfg.windows, cfg.k))
    bundle.tables["hits_levels"] = Table(("n", "fraction"),
                                         [(n, float(H.hits[:, j].mean())) for j, n in enumerate(H.levels)])
    bundle.summaries["hits"] = {"seed": cfg.seed, "samples": cfg.samples, "k": cfg.k, "windows": cfg.windows}


def run_scaling_probe(cfg, bundle):
    fam = build_family(cfg)
    factor = fam.space.factors[0]
    if cfg.geometry == "hyperplane":
        geometry = Affine(tuple(cfg.normal), cfg.offset)
    else:
        geometry = Point(tuple(cfg.point))
    rep = kappa_scaling_probe(factor, geometry, cfg.point, cfg.r_list, cfg.eps_list, samples=cfg.samples,
                              seed=cfg.seed, method="exact" if cfg.method == "exact" else "auto")
    rows = [(float(r), float(e), v, err) for (r, e), v, err in zip(rep.pairs, rep.values, rep.errors)]
    bundle.tables["scaling_probe"] = Table(("r", "eps", "measure", "error"), rows)
    bundle.summaries["scaling_probe"] = {"eps_slope": rep.eps_slope, "r_slope": rep.r_slope, "delta": rep.delta,
                                         "kappa": rep.kappa, "method": rep.method, "monotone": rep.monotone,
                                         "seed": cfg.seed, "samples": cfg.samples}


def run_measure(cfg, bundle):
    boxes = parse_boxes(cfg.boxes)
    dims = {b.dim for b in boxes}
    if len(dims) != 1:
        raise ValidationError(("boxes", f"boxes have mixed dimensions {sorted(dims)}"))
    space = build_family(cfg).space if cfg.kind == "shrinking" else AmbientSpace.lebesgue(dims.pop())
    exact = union_measure(boxes, space)
    mc = mc_measure(union_membership(boxes), space, cfg.samples, cfg.seed)
    rows = [(e.method, e.value, e.error, e.seed if e.seed is not None else "", e.samples or "") for e in (exact, mc)]
    bundle.tables["measure"] = Table(("method", "value", "error", "seed", "samples"), rows)
    bundle.summaries["measure"] = {"exact": str(exact.exact) if exact.exact is not None else None,
                                   "boxes": len(boxes)}


RUNNERS = {"measure": run_measure, "ubiquity": run_ubiquity, "series": run_series, "chung-erdos": run_chung_erdos,
           "hits": run_hits, "scaling-probe": run_scaling_probe}


def versions() -> dict:
    import numpy
    import scipy
    out = {"rectlimsup": __version__, "python": platform.python_version(), "numpy": numpy.__version__,
           "scipy": scipy.__version__}
    try:
        import numba
        out["numba"] = numba.__version__
    except ImportError:  # pragma: no cover
        out["numba"] = None
    return out


def run_experiment(cfg: ExperimentConfig) -> ReportBundle:
    bundle = ReportBundle()
    start = time.perf_counter()
    if cfg.task:
        RUNNERS[cfg.task](cfg, bundle)
    bundle.provenance = {"config": cfg.echo(), "versions": versions(), "seed": cfg.seed,
                         "timing_seconds": round(time.perf_counter() - start, 3)}
    return bundle

