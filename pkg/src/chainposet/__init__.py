"""Chain-component posets of exact interval dynamical systems."""

from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    OrdinalKind,
    OrdinalSyntaxError,
    add,
    classify,
    compare,
    format_ordinal,
    fundamental,
    omega_power,
    parse_ordinal,
    tail_split,
)
from .systems import (
    CantorExample,
    Conjugated,
    DenseBlocks,
    Domain,
    Identity,
    IntervalBlock,
    OrdinalMap,
    PLHomeo,
    Square,
    Variant,
    cantor_gaps,
    conjugate,
    dense_blocks,
    domain_of,
    evaluate,
    image_intervals,
    is_increasing,
    make_cantor_example,
    make_dense_blocks,
    make_homeo,
    make_ordinal_map,
)
from .chaingraph import (
    ChainGraph,
    ChainGraphError,
    Component,
    ComponentPoset,
    Condensation,
    ConstantField,
    Grid,
    Mode,
    PiecewiseField,
    auto_field,
    build_chain_graph,
    chain_components,
    condense,
    constant_field,
    dump_adjacency,
    grid_for,
    is_edge_subset,
    piecewise_field,
    reaches_recurrent,
    recurrent_cells,
    strongly_connected_components,
)
from .poset import (
    DensitySignature,
    IsoResult,
    PersistentPair,
    PosetError,
    RefinementTrace,
    TraceLevel,
    density_signature,
    dual,
    hasse_covers,
    is_linear,
    linear_order_type,
    match_components,
    maximal_elements,
    minimal_elements,
    order_isomorphic,
    to_dot,
    trace_level,
)
from .lyapunov import (
    CertificationReport,
    CheckResult,
    LyapunovAssignment,
    cantor_value,
    in_middle_third_set,
    synthesize,
    verify,
)
from .config import (
    AnalysisConfig,
    ConfigError,
    SystemParams,
    load_config,
    parse_config,
)
from .cli import (
    predicted_label,
    predicted_representatives,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "ONE",
    "ZERO",
    "Ordinal",
    "OrdinalKind",
    "OrdinalSyntaxError",
    "add",
    "classify",
    "compare",
    "format_ordinal",
    "fundamental",
    "omega_power",
    "parse_ordinal",
    "tail_split",
    "CantorExample",
    "Conjugated",
    "DenseBlocks",
    "Domain",
    "Identity",
    "IntervalBlock",
    "OrdinalMap",
    "PLHomeo",
    "Square",
    "Variant",
    "cantor_gaps",
    "conjugate",
    "dense_blocks",
    "domain_of",
    "evaluate",
    "image_intervals",
    "is_increasing",
    "make_cantor_example",
    "make_dense_blocks",
    "make_homeo",
    "make_ordinal_map",
    "ChainGraph",
    "ChainGraphError",
    "Component",
    "ComponentPoset",
    "Condensation",
    "ConstantField",
    "Grid",
    "Mode",
    "PiecewiseField",
    "auto_field",
    "build_chain_graph",
    "chain_components",
    "condense",
    "constant_field",
    "dump_adjacency",
    "grid_for",
    "is_edge_subset",
    "piecewise_field",
    "reaches_recurrent",
    "recurrent_cells",
    "strongly_connected_components",
    "DensitySignature",
    "IsoResult",
    "PersistentPair",
    "PosetError",
    "RefinementTrace",
    "TraceLevel",
    "density_signature",
    "dual",
    "hasse_covers",
    "is_linear",
    "linear_order_type",
    "match_components",
    "maximal_elements",
    "minimal_elements",
    "order_isomorphic",
    "to_dot",
    "trace_level",
    "CertificationReport",
    "CheckResult",
    "LyapunovAssignment",
    "cantor_value",
    "in_middle_third_set",
    "synthesize",
    "verify",
    "AnalysisConfig",
    "ConfigError",
    "SystemParams",
    "load_config",
    "parse_config",
    "predicted_label",
    "predicted_representatives",
    "run",
    "__version__",
]
