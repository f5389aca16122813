"""Resonant families, rate functions, sanitization and integer witnesses."""
from .families import (ENUM_CAP, LevelScheme, LinearFormsSystem, RationalSystem, ResonantFamily, ResonantItem,
                       ShrinkingSystem, item_boxes)
from .rates import (Exponential, Floor, Max, Mul, PowerLog, Rate, Table, as_rate, check_monotone,
                    generalized_inverse, lambda_regularity, max_rate, parse_rate)
from .sanitize import RatePair, SanitizedRates, make_rates, sanitize_rates
from .witness import minkowski_witness, verify_witness, volume_condition


def beta(item, family):
    """Weight of an item: q for rational points, n for shrinking targets,
    max_k Phi_k^-1(|q_k|^+) for linear forms."""
    return family.beta(item)


def enumerate_level(family, n, cap=ENUM_CAP):
    return family.enumerate_level(n, cap)
