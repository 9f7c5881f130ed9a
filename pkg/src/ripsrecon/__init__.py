"""Vietoris-Rips reconstruction of model manifolds with certified scale windows."""

from .complex import (
    RipsComplex,
    SimplicialComplex,
    SimplicialMap,
    SubdivisionComplex,
    barycentric_subdivision,
    check_homotopy_conditions,
    check_simplicial,
    contiguous,
    cycle_complex,
    is_connected,
    rips_complex,
)
from .conditions import (
    ConstantsReport,
    ScaleWindow,
    check_distortion,
    delta_of,
    distortion_threshold,
    gh_window,
    h_window,
    reach_bounds,
    verify_contiguity_chain,
    verify_surjectivity_construction,
)
from .homology import BettiVector, betti_numbers, euler_characteristic
from .jung import (
    CircumResult,
    check_circum_bound,
    check_subset_center,
    euclidean_circumcenter,
    geodesic_circumcenter,
    jung_J,
    jung_min_diam,
)
from .manifolds import Grid, ManifoldModel, Random, embed, geodesic_distance, perturb, reference_net, sample
from .metric import (
    Correspondence,
    FiniteMetricSpace,
    correspondence_distortion,
    diameter,
    gh_upper_bound,
    hausdorff_distance,
    nn_correspondence,
)

__version__ = "0.1.0"

__all__ = [
    "BettiVector",
    "CircumResult",
    "ConstantsReport",
    "Correspondence",
    "FiniteMetricSpace",
    "Grid",
    "ManifoldModel",
    "Random",
    "RipsComplex",
    "ScaleWindow",
    "SimplicialComplex",
    "SimplicialMap",
    "SubdivisionComplex",
    "barycentric_subdivision",
    "betti_numbers",
    "check_circum_bound",
    "check_distortion",
    "check_homotopy_conditions",
    "check_simplicial",
    "check_subset_center",
    "contiguous",
    "correspondence_distortion",
    "cycle_complex",
    "delta_of",
    "diameter",
    "distortion_threshold",
    "embed",
    "euclidean_circumcenter",
    "euler_characteristic",
    "geodesic_circumcenter",
    "geodesic_distance",
    "gh_upper_bound",
    "gh_window",
    "h_window",
    "hausdorff_distance",
    "is_connected",
    "jung_J",
    "jung_min_diam",
    "nn_correspondence",
    "perturb",
    "reach_bounds",
    "reference_net",
    "rips_complex",
    "sample",
    "verify_contiguity_chain",
    "verify_surjectivity_construction",
]
