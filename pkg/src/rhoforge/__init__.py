"""Chains over finite abelian groups, glued polytopes, bounding-chain
towers, triangulated complexes, hyperbolized fibrations, and lens-space
trigonometric invariants."""

from .groups import FiniteAbelianGroup, GroupElement, GroupMismatchError, cyclic
from .bar import BarChain, bar_to_hom, gen_boundary, hom_to_bar
from .smith import (
    SmithResult,
    bareiss_determinant,
    integer_rank,
    smith_normal_form,
)
from .polytopes import (
    ColoredCell,
    ColoredPolytope,
    ColoringError,
    NotACycleError,
    PolytopeError,
    VertexLabeling,
    assemble_polytopes,
    octagon_cells,
    octagon_chain,
    octagon_polytope,
)
from .towers import (
    BoundingResult,
    ResourceCapError,
    Tower,
    bounding_chain,
    boundary_cylinder_sum,
    catalan_number,
    covering,
    cylinder,
    cylinder_cell,
    lemma_bound,
    thm11_constant,
    tower,
)
from .delta import (
    DeltaComplex,
    DeltaComplexError,
    FreeAction,
    HomologySummary,
    barycentric,
    boundary_simplex,
    circle,
    cone,
    join,
    ngon,
    orbit_action,
    point,
    prism,
    quotient,
    simplex,
)
from .hyperbolize import (
    ComplexOverSimplex,
    OverSimplexError,
    construction_count,
    degree_structure,
    fiber_product,
    hyperbolized_simplex,
    hyperbolized_sphere,
    relhyp_count,
    simplex_over_itself,
    thm12_constant,
    williams,
    z_comparison_table,
    z_formula,
)
from .lens import (
    LensError,
    LensSpec,
    divisor_count,
    growth_exponent,
    homotopy_invariant_count,
    invariant_count,
    lens_complex,
    lens_count,
    rho_atiyah_bott,
    rho_lower_bound_check,
    thm13_lower,
)

__all__ = [
    "FiniteAbelianGroup",
    "GroupElement",
    "GroupMismatchError",
    "cyclic",
    "BarChain",
    "bar_to_hom",
    "gen_boundary",
    "hom_to_bar",
    "SmithResult",
    "bareiss_determinant",
    "integer_rank",
    "smith_normal_form",
    "ColoredCell",
    "ColoredPolytope",
    "ColoringError",
    "NotACycleError",
    "PolytopeError",
    "VertexLabeling",
    "assemble_polytopes",
    "octagon_cells",
    "octagon_chain",
    "octagon_polytope",
    "BoundingResult",
    "ResourceCapError",
    "Tower",
    "bounding_chain",
    "boundary_cylinder_sum",
    "catalan_number",
    "covering",
    "cylinder",
    "cylinder_cell",
    "lemma_bound",
    "thm11_constant",
    "tower",
    "DeltaComplex",
    "DeltaComplexError",
    "FreeAction",
    "HomologySummary",
    "barycentric",
    "boundary_simplex",
    "circle",
    "cone",
    "join",
    "ngon",
    "orbit_action",
    "point",
    "prism",
    "quotient",
    "simplex",
    "ComplexOverSimplex",
    "OverSimplexError",
    "construction_count",
    "degree_structure",
    "fiber_product",
    "hyperbolized_simplex",
    "hyperbolized_sphere",
    "relhyp_count",
    "simplex_over_itself",
    "thm12_constant",
    "williams",
    "z_comparison_table",
    "z_formula",
    "LensError",
    "LensSpec",
    "divisor_count",
    "growth_exponent",
    "homotopy_invariant_count",
    "invariant_count",
    "lens_complex",
    "lens_count",
    "rho_atiyah_bott",
    "rho_lower_bound_check",
    "thm13_lower",
]

__version__ = "0.1.0"
