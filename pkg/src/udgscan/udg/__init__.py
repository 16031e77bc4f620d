from .build import assemble_original_udg
from .calls import build_call_graph, is_invocation_pattern, is_reflective_site, site_targets
from .cfg import build_cfg, unreachable_nodes
from .ddg import build_ddg
from .graph import (
    CALL,
    CONTROL_FLOW,
    DATA_DEPENDENCY,
    EDGE_TYPES,
    UdgEdge,
    UnifiedDependencyGraph,
    make_external_node,
)

__all__ = [
    "CALL",
    "CONTROL_FLOW",
    "DATA_DEPENDENCY",
    "EDGE_TYPES",
    "UdgEdge",
    "UnifiedDependencyGraph",
    "assemble_original_udg",
    "build_call_graph",
    "build_cfg",
    "build_ddg",
    "is_invocation_pattern",
    "is_reflective_site",
    "make_external_node",
    "site_targets",
    "unreachable_nodes",
]
