"""Desk-scale verification lab for LIS streaming-space lower-bound gadgets."""

from .codes import BlockCode, CodeError, gen_inner_binary, gen_outer
from .core import (
    DEC,
    INC,
    IndexSet,
    MonotoneWitness,
    Sequence,
    SequenceError,
    distance_to_monotonicity,
    es_witness,
    lds,
    lis_dp,
    lis_exhaustive,
    lis_patience,
    lis_restricted,
)
from .fooling import FoolingCertificate, check_fooling_set, type1_game, type2_game
from .orders import StreamOrder, run_stream, type1_witness
from .robp import (
    BranchingProgram,
    SeparatedFamily,
    build_distinguisher,
    check_computes_lis,
    check_read_once,
    search_separated_family,
)
from .type1 import Type1Instance, build_z, disj_gadget, type1_gap
from .type2 import GridInstance, build_matrix, grid_max_weight, type2_bounds

__version__ = "0.1.0"

__all__ = [
    "BlockCode",
    "BranchingProgram",
    "CodeError",
    "DEC",
    "FoolingCertificate",
    "GridInstance",
    "INC",
    "IndexSet",
    "MonotoneWitness",
    "Sequence",
    "SequenceError",
    "SeparatedFamily",
    "StreamOrder",
    "Type1Instance",
    "build_distinguisher",
    "build_matrix",
    "build_z",
    "check_computes_lis",
    "check_fooling_set",
    "check_read_once",
    "disj_gadget",
    "distance_to_monotonicity",
    "es_witness",
    "gen_inner_binary",
    "gen_outer",
    "grid_max_weight",
    "lds",
    "lis_dp",
    "lis_exhaustive",
    "lis_patience",
    "lis_restricted",
    "run_stream",
    "search_separated_family",
    "type1_game",
    "type1_gap",
    "type1_witness",
    "type2_bounds",
    "type2_game",
    "__version__",
]
