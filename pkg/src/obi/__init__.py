"""Broadcast independence numbers of oriented two-step circulant graphs."""
from .bounds import BoundReport, bound_report, global_upper_bound, lower_bounds, predicted_beta, upper_bound_sigma
from .broadcast import Broadcast, check_independent, is_independent
from .circulant import (
    CirculantGraph,
    CirculantSpec,
    DistanceTable,
    InvalidCirculantError,
    RegimeError,
    all_pairs,
    build_graph,
    circulant,
    classify_regime,
    closed_form_diameter,
    closed_form_distance,
)
from .constructions import ConstructionRecord, construct, constructions_for
from .solver import SolveOptions, SolveResult, beta_b, branch_and_bound_beta, brute_force_beta, undirected_beta

__version__ = "0.1.0"
