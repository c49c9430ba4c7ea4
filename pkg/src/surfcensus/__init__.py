"""surfcensus: triangulated closed surfaces on few vertices.

Exhaustive enumeration up to combinatorial equivalence, topological and
symmetry classification, and randomized search for geometric realizations
of the orientable ones with exact integer predicates.
"""

__version__ = "0.1.0"

from .complexes import (
    TriangleSet,
    VertexLink,
    edge_index,
    edge_from_index,
    edge_sum_vector,
    euler_characteristic,
    f_vector,
    is_closed,
    is_connected,
    link_is_single_circle,
    verify_surface,
    vertex_link,
)
from .classification import (
    InvariantKey,
    SurfaceRecord,
    TopologicalType,
    are_isomorphic,
    as_determinant,
    automorphism_group_order,
    canonical_form,
    deduplicate,
    degree_sequence,
    heawood_min_vertices,
    invariant_key,
    is_neighborly,
    orientability,
    surface_type,
    topological_type,
)
from .enumeration import (
    EnumerationConfig,
    beginning_segment,
    enumerate_raw,
    enumerate_records,
    enumerate_surfaces,
)
from .realization import (
    CoordinateAssignment,
    Degenerate,
    RealizationConfig,
    RealizationResult,
    is_embedding,
    orient3d,
    perturb,
    random_coordinates,
    random_realize,
    recycle,
    shrink,
    triangle_segment_disjoint,
)
