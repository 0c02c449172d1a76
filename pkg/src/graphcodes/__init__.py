"""Compressed graphcodes of two-parameter persistence modules over F2."""
from .core import (Bar, Bigrade, Graphcode, Presentation, add_columns, direct_sum, disjoint_union,
                   entangled, pivot)
from .engine import (BatchReducer, build_graphcode, compress, connected_components, expand,
                     is_disjoint_path_union, label_isomorphic, reduce_slice)
from .intervals import (Decomposed, EtaSequence, NotIntervalDecomposable, StaircaseInterval,
                        decide_interval_decomposition, eta_from_graphcode, normal_form_check)
from .present import minimize, presentation_from_graphcode, roundtrip_check
from .scc_io import parse_graphcode, parse_presentation, write_graphcode, write_presentation

__version__ = "0.1.0"

__all__ = [
    "Bar", "Bigrade", "Graphcode", "Presentation", "add_columns", "direct_sum", "disjoint_union",
    "entangled", "pivot",
    "BatchReducer", "build_graphcode", "compress", "connected_components", "expand",
    "is_disjoint_path_union", "label_isomorphic", "reduce_slice",
    "Decomposed", "EtaSequence", "NotIntervalDecomposable", "StaircaseInterval",
    "decide_interval_decomposition", "eta_from_graphcode", "normal_form_check",
    "minimize", "presentation_from_graphcode", "roundtrip_check",
    "parse_graphcode", "parse_presentation", "write_graphcode", "write_presentation",
]
