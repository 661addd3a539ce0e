"""Self-affine fractal shadow analysis.

Constructs self-affine and rectifiable families, decides whether an IFS
projects very thick shadows in every 1-dimensional subspace via the
convex-hull component criterion, certifies total disconnectedness, and
reports dimension estimates and bounds.
"""

__version__ = "0.1.0"

from .convex import (
    ConvexPointSet,
    Hyperplane,
    IntersectionResult,
    body,
    diameter,
    diameter_squared,
    hull_vertices_2d,
    hulls_intersect,
    point_in_hull,
    projection_interval,
    support,
)
from .dims import (
    AffinityRoot,
    BoxCount,
    DimensionReport,
    affinity_bound_closed,
    affinity_root,
    box_count_dimension,
    digit_box_count,
    dimension_report,
    similarity_dimension,
    singular_value_function,
    singular_values,
)
from .families import (
    BlindGroup,
    CrossCorner,
    MendivilTaylor,
    PolygonBlind,
    PolytopeUnion,
    RotatedSquare,
    Segment,
    SimplexIfs,
    TriangleGrid,
    VenetianBlind,
    centered_inner_shift,
    cross_corner,
    mendivil_taylor,
    mendivil_taylor_threshold,
    polygon_blind,
    polygon_blind_sweep,
    polytope_union,
    reflect_segments,
    rotated_square,
    segment_sweep,
    simplex_ifs,
    triangle_grid_ifs,
    venetian_blind,
)
from .ifs import (
    AffineMap,
    ComponentDecomposition,
    IteratedFunctionSystem,
    attractor_sample,
    component_decomposition,
    compose,
    fixed_point,
    iterate_bodies,
    make_affine_map,
    make_ifs,
    operator_norm,
)
from .scalars import EXACT, FLOAT, Context, QSqrt2, float_context
from .shadows import (
    CoverageReport,
    DisconnectReport,
    ShadowReport,
    VertexReport,
    disconnectedness_check,
    empirical_coverage,
    line_witness,
    thick_shadow_check,
    vertices_in_attractor,
)
