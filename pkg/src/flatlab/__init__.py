"""Numerical laboratory for flat polynomials with +/-1 and 0/1 coefficients."""

__version__ = "0.1.0"

from .sequences import BinarySequence, SignSequence, parse_sequence  # noqa: E402
from .polycore import (  # noqa: E402
    FlatnessReport,
    NormalizedPolynomial,
    UnitGrid,
    evaluate_at_roots,
    flatness_report,
    l2_norm_sq_sampled,
    l4_norm_4_exact,
    lp_norm_estimate,
    mahler_measure,
    merit_factor,
)
from .seqstats import autocorrelation, l4_from_autocorrelation  # noqa: E402

__all__ = [
    "BinarySequence",
    "FlatnessReport",
    "NormalizedPolynomial",
    "SignSequence",
    "UnitGrid",
    "autocorrelation",
    "evaluate_at_roots",
    "flatness_report",
    "l2_norm_sq_sampled",
    "l4_from_autocorrelation",
    "l4_norm_4_exact",
    "lp_norm_estimate",
    "mahler_measure",
    "merit_factor",
    "parse_sequence",
]
