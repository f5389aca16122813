"""Experiment configuration: a flat INI file with [system], [task] and [output] sections.

Example:

    [system]
    kind = rational          # rational | linear_forms | shrinking
    d = 1
    phi = u^-1               # one rate per factor, separated by ';'
    M = 16

    [task]
    levels = 2-5
    balls = default
    seed = 0

Rates are written "c*u^a*log(u)^b" (or "b^-u").  Numbers accept fractions like 1/4.
"""
from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from ..exceptions import ValidationError
from ..systems.rates import parse_rate

TASKS = ("measure", "ubiquity", "series", "chung-erdos", "hits", "scaling-probe")
KINDS = ("rational", "linear_forms", "shrinking")
STATISTICAL = ("hits", "scaling-probe", "ubiquity", "measure")


@dataclass
class ExperimentConfig:
    # system
    kind: str = "rational"
    d: int = 1
    h: int = 1
    phi: list = field(default_factory=lambda: ["u^-1"])
    Phi: list = field(default_factory=list)
    M: int = 16
    scheme: str = ""
    epsilon: float = 0.1
    p_range: str = "per_q"
    bases: list = field(default_factory=list)
    digits: list = field(default_factory=list)
    x_o: list = field(default_factory=list)
    u_max: int = 10 ** 4
    # task
    task: str = ""
    levels: list = field(default_factory=lambda: [1, 2, 3])
    balls: str = "default"
    ball_count: int = 20
    ball_level: int = 8
    samples: int = 200_000
    seed: int | None = None
    method: str = "auto"
    series: str = "theorem"
    N: int = 10 ** 4
    Q: int = 10 ** 4
    windows: list = field(default_factory=lambda: [4, 8, 16])
    k: int = 1
    r_list: list = field(default_factory=list)
    eps_list: list = field(default_factory=list)
    geometry: str = "point"
    point: list = field(default_factory=list)
    normal: list = field(default_factory=list)
    offset: int = 0
    boxes: str = ""
    workers: int = 1
    cap: int = 10 ** 7
    # output
    out: str = "results"

    def echo(self) -> dict:
        out = asdict(self)
        for key in ("r_list", "eps_list", "point", "x_o"):
            out[key] = [str(v) for v in out[key]]
        return out


def parse_number(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_levels(text: str) -> list:
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def parse_list(text: str, sep: str = ",") -> list:
    return [parse_number(t) for t in text.split(sep) if t.strip()]


def parse_digit_sets(text: str) -> list:
    return [tuple(int(x) for x in part.split(",") if x.strip()) for part in text.split(";") if part.strip()]


_INT = ("d", "h", "M", "u_max", "ball_count", "ball_level", "samples", "N", "Q", "k", "offset", "workers", "cap")
_FLOAT = ("epsilon",)
_STR = ("kind", "scheme", "p_range", "task", "balls", "method", "series", "geometry", "boxes", "out")


def from_parser(cp: configparser.ConfigParser, task: str | None = None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    problems = []
    values = {}
    for section in cp.sections():
        for key, val in cp.items(section):
            values[key] = val.strip()
    known = set(ExperimentConfig.__dataclass_fields__)
    if "name" in values and "task" not in values:
        values["task"] = values.pop("name")
    for attr, val in values.items():
        if attr not in known:
            problems.append((attr, "unknown configuration key"))
            continue
        try:
            if attr in _INT:
                setattr(cfg, attr, int(val))
            elif attr in _FLOAT:
                setattr(cfg, attr, float(val))
            elif attr in _STR:
                setattr(cfg, attr, val)
            elif attr == "seed":
                cfg.seed = int(val)
            elif attr in ("phi", "Phi"):
                rates = [t.strip() for t in val.split(";") if t.strip()]
                for r in rates:
                    parse_rate(r)
                setattr(cfg, attr, rates)
            elif attr == "levels":
                cfg.levels = parse_levels(val)
            elif attr in ("windows", "bases"):
                setattr(cfg, attr, [int(x) for x in parse_list(val)])
            elif attr == "digits":
                cfg.digits = parse_digit_sets(val)
            elif attr in ("x_o", "r_list", "eps_list", "point"):
                setattr(cfg, attr, parse_list(val))
            elif attr == "normal":
                cfg.normal = [int(x) for x in parse_list(val)]
        except (ValueError, ZeroDivisionError) as e:
            problems.append((attr, f"cannot parse {val!r}: {e}"))
        except ValidationError as e:
            problems.extend((attr, m) for _, m in e.problems)
    if task is not None:
        cfg.task = task
    problems.extend(validate(cfg))
    if problems:
        raise ValidationError(problems)
    return cfg


def validate(cfg: ExperimentConfig) -> list:
    problems = []
    if cfg.task not in TASKS:
        problems.append(("task", f"must be one of {', '.join(TASKS)}, got {cfg.task!r}"))
    if cfg.kind not in KINDS:
        problems.append(("kind", f"must be one of {', '.join(KINDS)}, got {cfg.kind!r}"))
    for name in ("d", "h", "M", "u_max", "ball_count", "ball_level", "samples", "N", "Q", "k", "workers", "cap"):
        if getattr(cfg, name) < 1:
            problems.append((name, f"must be positive, got {getattr(cfg, name)}"))
    if not cfg.levels or any(n < 1 for n in cfg.levels):
        problems.append(("levels", f"need positive levels, got {cfg.levels}"))
    if cfg.task in STATISTICAL and cfg.seed is None:
        problems.append(("seed", f"a seed is required for the {cfg.task} task"))
    if cfg.seed is not None and not 0 <= cfg.seed < 2 ** 64:
        problems.append(("seed", f"must be an unsigned 64-bit integer, got {cfg.seed}"))
    if cfg.kind == "shrinking":
        if len(cfg.bases) != cfg.d:
            problems.append(("bases", f"need {cfg.d} bases, got {len(cfg.bases)}"))
        if len(cfg.digits) != cfg.d:
            problems.append(("digits", f"need {cfg.d} digit sets, got {len(cfg.digits)}"))
        for i, (b, lam) in enumerate(zip(cfg.bases, cfg.digits)):
            bad = [x for x in lam if not 0 <= x < b]
            if bad or len(set(lam)) != len(lam) or not lam:
                problems.append(("digits", f"digit set {i} {sorted(lam)} is not a nonempty subset of 0..{b - 1}"))
        if cfg.x_o and len(cfg.x_o) != cfg.d:
            problems.append(("x_o", f"need {cfg.d} targets, got {len(cfg.x_o)}"))
    if cfg.kind == "linear_forms" and not cfg.Phi:
        problems.append(("Phi", "linear forms need growth functions Phi"))
    if len(cfg.phi) not in (1, cfg.d):
        problems.append(("phi", f"need 1 or {cfg.d} rates, got {len(cfg.phi)}"))
    if cfg.method not in ("auto", "exact", "monte-carlo"):
        problems.append(("method", f"must be auto, exact or monte-carlo, got {cfg.method!r}"))
    if cfg.task == "series" and cfg.series not in ("theorem", "application"):
        problems.append(("series", f"must be theorem or application, got {cfg.series!r}"))
    if cfg.task == "scaling-probe":
        if not cfg.r_list:
            problems.append(("r_list", "scaling probe needs radii"))
        if len(cfg.eps_list) < 2:
            problems.append(("eps_list", "scaling probe needs at least two eps values"))
        if cfg.geometry not in ("point", "hyperplane"):
            problems.append(("geometry", f"must be point or hyperplane, got {cfg.geometry!r}"))
    if cfg.task == "measure" and not cfg.boxes:
        problems.append(("boxes", "measure task needs boxes"))
    return problems


def load_config(path, task: str | None = None, seed: int | None = None) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(("config", f"no such file: {path}"))
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(path.read_text())
    except configparser.Error as e:
        raise ValidationError(("config", f"{path}: {e}"))
    if seed is not None:
        if not cp.has_section("task"):
            cp.add_section("task")
        cp.set("task", "seed", str(seed))
    return from_parser(cp, task)


def config_from_text(text: str, task: str | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    cp.read_string(text)
    return from_parser(cp, task)
