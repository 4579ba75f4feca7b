"""Lattices, flat tori and rational quadratic forms."""

from .gram import GramMatrix, builtin_lattice, dual_gram, parse_gram
from .enumeration import (
    SpectrumMultiset,
    ThetaSeries,
    norm_counts,
    short_vectors,
    theta_coefficients,
    torus_spectrum,
)
