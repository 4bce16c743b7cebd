"""Solver library for (sigma, rho)-domination with residue-class sets.

The public surface re-exports the main data types and entry points; see the
submodules for the machinery (graphs/decompositions, the sparse-language
toolkit, the prime-field convolution engine, the dynamic program, the
enumeration and GF(2) oracles, gadget builders, and instance generators).
"""

from .graphs import (
    DecompositionError,
    Graph,
    GraphWithPortals,
    NiceTreeDecomposition,
    ParseError,
    TreeDecomposition,
    graph_to_gr,
    decomposition_to_td,
    heuristic_decomposition,
    make_nice,
    parse_decomposition,
    parse_graph,
)
from .residues import (
    ALLOFF,
    EVEN,
    ODD,
    REFLEXIVE_ALLOFF,
    Classification,
    Kind,
    ProblemSpec,
    ResidueClass,
    State,
    classify,
    cut_set,
    decompose,
    inverse,
    parse_residue_class,
    recompose,
    spec,
)
from .sparse import (
    Language,
    SigmaDefiningSet,
    compress,
    decompress,
    is_sparse,
    remainder,
    sigma_defining_set,
)
from .combine import combine_fast, combine_naive, combine_strings
from .solver import (
    DPOptions,
    SolveReport,
    compile_decomposition,
    solve,
    solve_lights_out,
)
from .oracle import (
    Gf2System,
    OracleCapError,
    brute_force_sizes,
    gf2_min_weight,
    gf2_solve,
    lights_out_system,
    realized_language,
)

__version__ = "0.1.0"
