"""colimkit: finite colimits, double categories with connections, relay simulation."""

from .category import (
    ArrowGen,
    CategoryPresentation,
    CommutativeWord,
    CompositionTable,
    NormalizationResult,
    Path,
    Relation,
    check_category_axioms,
    check_commutative_square,
    commutative_normalize,
    compose_path,
    cyclic_monoid_table,
    free_presentation,
    identity,
    normalize_path,
    paths_equal,
)
from .colimit import (
    Cocone,
    ColimitResult,
    Edge,
    FinFn,
    FinSetObj,
    SetDiagram,
    ShapeGraph,
    check_cocone,
    cocone,
    colimit,
    diagram,
    factorize,
    finset,
    verify_universal_property,
)
from .cube import CubeFaces, cube_composite, degenerate_cube, identity_cube, is_commutative_cube
from .double import (
    GridExpr,
    Square,
    boundaries_equal,
    compose_columns_first,
    compose_rows_first,
    double_identity,
    eps1,
    eps2,
    eval_grid_boundary,
    gamma,
    gamma_prime,
    generator,
    grid,
    hcompose,
    thin_eval,
    thin_square,
    vcompose,
)
from .errors import *  # noqa: F401,F403
from .outcome import Report, Verdict
from .poset import FinitePoset, divisibility_poset, extensional_poset, join_as_colimit_check, numeric_poset, poset_join
from .relay import LabelledPart, Message, ServerNetwork, diamond_network, reassemble, route, run_relay, split
from .rewrite import SearchResult, grids_equal, squares_equal

__version__ = "0.1.0"
