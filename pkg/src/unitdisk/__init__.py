"""Unit disk graph shortest-path trees and minimum separating disk sets."""
from .datagen import (
    DomainSpec,
    GeneratedInstance,
    add_strip_clutter,
    generate,
    make_domain,
    read_instance,
    write_instance,
)
from .delaunay import Triangulation, build_delaunay
from .dual_index import DualIndex, build_dual_index, query_crossing, query_noncrossing
from .errors import (
    DegenerateTerminals,
    DuplicatePoints,
    EmptySet,
    IndexOutOfRange,
    InvalidDimensions,
    OnAxis,
    ParseError,
    TerminalCovered,
    TooLarge,
    UnitDiskError,
    WrongSide,
)
from .geom import NormalizedInstance, crosses_terminal, dist_sq, normalize
from .neighbor import NNIndex, build_nn
from .oracle import oracle_separation, oracle_sssp
from .sep_compact import separation_compact
from .sep_generic import INFEASIBLE, SeparationAnswer, is_separating, separation_generic, witness_cycle
from .sssp import (
    ShortestPathResult,
    build_explicit_graph,
    sssp_delaunay,
    sssp_explicit_bfs,
    sssp_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
