"""Blowing up orbits of skew products: Denjoy examples, pinched quasiperiodic
systems, almost periodic bases and two gallery constructions."""

from .config import RunConfig, load_config
from .denjoy import DenjoySystem, WeightSequence, denjoy_map
from .measure import HybridMeasure, cdf, cdf_left, pushforward, quantile
from .skew import BlownUpSystem, default_qpf
from .verify import VerificationReport, verify

__all__ = [
    "BlownUpSystem",
    "DenjoySystem",
    "HybridMeasure",
    "RunConfig",
    "VerificationReport",
    "WeightSequence",
    "cdf",
    "cdf_left",
    "default_qpf",
    "denjoy_map",
    "load_config",
    "pushforward",
    "quantile",
    "verify",
]
