"""Almost simple polytopes, orbifold data of their retraction sequences, and
GKM descriptions of the equivariant cohomology of the toric varieties they
define. All arithmetic is exact."""

from .linalg import (
    FiniteAbelianGroup,
    IntMatrix,
    abelian_quotient,
    hnf,
    kernel_basis,
    primitive,
    quotient_projection,
    saturate,
    snf,
)
from .polytope import (
    LatticePolytope,
    edge_direction,
    face_lattice,
    facets_from_vertices,
    h_vector,
    is_simple,
    is_simple_vertex,
    normal_fan,
    vertices_from_facets,
)
from .retraction import (
    NotAlmostSimple,
    PolytopalComplex,
    betti_numbers,
    delete_vertex,
    enumerate_retractions,
    find_retraction,
    free_vertices,
    height_retraction,
    is_almost_simple,
    star,
)
from .singularity import (
    is_divisive,
    is_divisive_sequence,
    orbifold_group,
    step_projection,
)
from .symbolic import (
    LaurentPolynomial,
    LinearForm,
    Polynomial,
    divides_binomial,
    divides_linear,
    parse,
)
from .cohomology import (
    GKMGraph,
    PiecewiseElement,
    gkm_check_H,
    gkm_check_K,
    gkm_graph,
    hilbert_function,
    poincare_from_hilbert,
    pp_check,
    restriction_to_cone,
)
from .io import corpus, corpus_element, load_element, load_polytope

__version__ = "0.1.0"
