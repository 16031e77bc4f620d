"""End-to-end enhancement: original graph in, enhanced graph out."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DiagnosticSink
from ..frontend.analysis import extract_globals, resolve_label_targets
from ..frontend.model import JumpTarget, RepoModel
from ..udg.graph import UnifiedDependencyGraph
from .oracle import ResolutionOracle
from .order import AnalysisSequence, compute_analysis_order
from .passes import (
    AuditEntry,
    add_global_nodes,
    enhance_polymorphic_calls,
    enhance_reflective_calls,
    reconstruct_labeled_jumps,
)
from .prune import prune_data_edges
from .summaries import FunctionSummary, compute_all_summaries


@dataclass
class EnhancementResult:
    graph: UnifiedDependencyGraph
    audit: list[AuditEntry] = field(default_factory=list)
    summaries: dict[str, FunctionSummary] = field(default_factory=dict)
    order: AnalysisSequence | None = None

    def audit_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.audit:
            key = f"{entry.tau}.{entry.op}"
            counts[key] = counts.get(key, 0) + 1
        return counts


def enhance_graph(
    model: RepoModel,
    original: UnifiedDependencyGraph,
    oracle: ResolutionOracle,
    diagnostics: DiagnosticSink | None = None,
    jump_targets: list[JumpTarget] | None = None,
) -> EnhancementResult:
    """Run the four passes in order: globals, call-edge refinement (with the
    call graph finalized before ordering), labeled jumps, then summary-based
    data-dependency pruning."""
    audit: list[AuditEntry] = []
    g = add_global_nodes(original, extract_globals(model), model, audit)
    g = enhance_polymorphic_calls(g, oracle, model, diagnostics, audit)
    g = enhance_reflective_calls(g, oracle, model, diagnostics, audit)
    targets = jump_targets if jump_targets is not None else resolve_label_targets(model, diagnostics)
    g = reconstruct_labeled_jumps(g, targets, audit)
    order = compute_analysis_order(g, model)
    summaries = compute_all_summaries(g, model, order)
    enhanced = prune_data_edges(g, summaries, model, diagnostics, audit)
    return EnhancementResult(graph=enhanced, audit=audit, summaries=summaries, order=order)
