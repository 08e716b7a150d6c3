"""Explicit extended formulations from nonnegative slack factorizations."""

from .bounds import BoundsReport, face_count_lower_bound, linear_rank_lower_bound
from .errors import PolyextError
from .extension import ExtendedSystem, build_extension, check_projection_inclusion, lift_vertex
from .folding import build_polygon_factorization, folding_axes
from .lp import LPProblem, solve
from .network import ComparatorNetwork, batcher_network
from .permfold import build_permutahedron_factorization
from .polytope import (
    LinearSystemH,
    Permutahedron,
    PointVec,
    PolygonV,
    make_grid_parabola_polygon,
    make_regular_ngon,
    permutahedron_hrep,
    permutahedron_vertices,
    polygon_to_hrep,
)
from .rounding import (
    RoundedSystem,
    compute_delta,
    membership_test,
    prepare_rounded_system,
    round_system,
    select_max_volume_rows,
    verify_recovery,
)
from .slack import (
    NonnegFactorization,
    SlackMatrix,
    check_norm_bound,
    normalize_pair,
    slack_matrix,
    verify_factorization,
)

__all__ = [name for name in dir() if not name.startswith("_")]
