"""Exact point counting on e^k v^l - d^k u^l = h and its certificates.

variety   boxes, brute and congruence counting, M choice, s-subdivision
certify   rank-deficiency certificates for one subdivision interval
lattice   Gauss-reduced interval lattices, both (d,e) and (v,u) sides
lines     the k=2, h=1 line families (kappa = -1 and kappa = 3)
"""

from .variety import (
    BoxRanges,
    ExplicitBox,
    SolutionQuad,
    SubdivisionPlan,
    VarietyParams,
    brute_count,
    choose_M,
    congruence_count,
    proximity_report,
    subdivide,
)
from .certify import IntervalCertificate, certify_interval, json_dumps_wide
from .lattice import (
    ReducedLattice,
    lattice_for_interval,
    reduce_basis,
    u_side_anchor,
    u_side_lattice,
)
from .lines import LineFamily, count_split, enumerate_lines

__all__ = [
    "BoxRanges",
    "ExplicitBox",
    "SolutionQuad",
    "SubdivisionPlan",
    "VarietyParams",
    "brute_count",
    "choose_M",
    "congruence_count",
    "proximity_report",
    "subdivide",
    "IntervalCertificate",
    "certify_interval",
    "json_dumps_wide",
    "ReducedLattice",
    "lattice_for_interval",
    "reduce_basis",
    "u_side_anchor",
    "u_side_lattice",
    "LineFamily",
    "count_split",
    "enumerate_lines",
]
