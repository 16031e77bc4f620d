"""Graph enhancement passes: globals, call-edge refinement, labeled jumps."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DiagnosticSink, OracleParseError
from ..frontend.model import GlobalDecl, JumpTarget, RepoModel, StatementNode
from ..udg.calls import function_of_entry, is_invocation_pattern, site_targets
from ..udg.graph import CALL, CONTROL_FLOW, DATA_DEPENDENCY, UdgEdge, UnifiedDependencyGraph
from .oracle import ResolutionOracle, extract_json_object
from .prompts import (
    render_polymorphic_prompt,
    render_reflection_class_prompt,
    render_reflection_method_prompt,
    render_statement_block,
)

DATAFLOW_CONTEXT_CAP = 60  # statements nearest the call site kept in prompts


@dataclass
class AuditEntry:
    op: str  # "add" | "remove"
    tau: str
    src: str
    dst: str
    pass_name: str
    variable: str | None = None

    def as_dict(self) -> dict:
        return {
            "op": self.op,
            "tau": self.tau,
            "src": self.src,
            "dst": self.dst,
            "pass": self.pass_name,
            "variable": self.variable,
        }


def add_global_nodes(
    g: UnifiedDependencyGraph,
    globals_list: list[GlobalDecl],
    model: RepoModel,
    audit: list[AuditEntry] | None = None,
) -> UnifiedDependencyGraph:
    """Add global statements as nodes, linking definitions among global
    assignments only; no control-flow or call edges, and no edges into
    function bodies (those are recovered as implicit context)."""
    out = g.copy()
    for decl in globals_list:
        node = model.stmt(decl.statement)
        if node.id not in out.nodes:
            out.add_node(node)
    by_var: dict[tuple[str, str], str] = {}
    any_var: dict[str, str] = {}
    for decl in globals_list:
        if decl.variable:
            by_var[(decl.class_name, decl.variable)] = decl.statement
            any_var.setdefault(decl.variable, decl.statement)
    for decl in globals_list:
        if not decl.variable:
            continue
        for v in sorted(decl.rhs_uses):
            src = by_var.get((decl.class_name, v)) or any_var.get(v)
            if src is None or src == decl.statement:
                continue
            edge = UdgEdge(
                src=src,
                dst=decl.statement,
                tau=DATA_DEPENDENCY,
                provenance="enhancement_added",
                variable=v,
            )
            if edge.key() not in {e.key() for e in out.edges}:
                out.add_edge(edge)
                if audit is not None:
                    audit.append(AuditEntry("add", DATA_DEPENDENCY, src, decl.statement, "globals", v))
    return out


def backward_dataflow_context(
    g: UnifiedDependencyGraph,
    stmt: StatementNode,
    variables: set[str],
    cap: int = DATAFLOW_CONTEXT_CAP,
) -> tuple[list[StatementNode], bool]:
    """Transitive backward closure over data edges for the requested
    variables; source order, truncated oldest-first at `cap` statements."""
    frontier = [
        e.src for e in g.in_edges(stmt.id, DATA_DEPENDENCY) if e.variable in variables
    ]
    seen: set[str] = set()
    work = list(frontier)
    while work:
        cur = work.pop(0)
        if cur in seen:
            continue
        seen.add(cur)
        for e in g.in_edges(cur, DATA_DEPENDENCY):
            if e.src not in seen:
                work.append(e.src)
    nodes = [g.nodes[sid] for sid in seen if not g.nodes[sid].synthetic]
    nodes.sort(key=lambda n: n.sort_key())
    truncated = len(nodes) > cap
    if truncated:
        nodes = nodes[-cap:]
    return nodes, truncated


def _hierarchy_text(model: RepoModel) -> str:
    lines = []
    for sub, sup in sorted(model.hierarchy.edges):
        lines.append(f"{sub} extends {sup}")
    for cls in sorted(model.classes.values(), key=lambda c: c.name):
        for sup in cls.supertypes:
            if model.resolve_class(sup) is None:
                lines.append(f"{cls.name} extends {sup} (external)")
    return "\n".join(lines)


def _call_statement_line(stmt: StatementNode, model: RepoModel) -> str:
    func = model.functions.get(stmt.owner)
    qual = f"{func.class_name}.{func.name}" if func else "global"
    return f"{qual}:{stmt.start_line}| {stmt.code or stmt.text.strip()}"


def enhance_polymorphic_calls(
    g: UnifiedDependencyGraph,
    oracle: ResolutionOracle,
    model: RepoModel,
    diagnostics: DiagnosticSink | None = None,
    audit: list[AuditEntry] | None = None,
) -> UnifiedDependencyGraph:
    """Prune infeasible dispatch targets at call sites with >= 2 in-repo
    candidates.  Unparseable or unmatched oracle answers keep every edge."""
    out = g.copy()
    ordered = sorted(
        (n for n in out.nodes.values() if n.calls and not n.synthetic),
        key=lambda n: n.sort_key(),
    )
    for stmt in ordered:
        per_site = site_targets(out, model, stmt)
        for idx, site in enumerate(stmt.calls):
            targets = [t for t in per_site.get(idx, []) if not t.startswith("external:")]
            if len(targets) < 2:
                continue
            receiver_vars = {site.receiver} if site.receiver and site.receiver != "this" else set(stmt.uses)
            context_nodes, truncated = backward_dataflow_context(out, stmt, receiver_vars)
            candidates = []
            by_signature: dict[str, str] = {}
            for t in sorted(targets):
                func = function_of_entry(model, t)
                sig = func.signature_text()
                candidates.append(sig)
                by_signature[sig] = t
                by_signature[f"{func.class_name.split('.')[-1]}.{func.name}"] = t
                by_signature[f"{func.class_name}.{func.name}"] = t
            block = render_statement_block(context_nodes, model)
            if truncated:
                block = "(truncated: oldest definitions omitted)\n" + block
            prompt = render_polymorphic_prompt(
                block,
                _call_statement_line(stmt, model),
                candidates,
                _hierarchy_text(model),
            )
            try:
                raw = oracle.complete(prompt, site=f"{stmt.id}/poly{idx}")
                answer = extract_json_object(raw)
                named = answer.get("feasible_targets")
                if not isinstance(named, list):
                    raise OracleParseError("feasible_targets missing or not a list")
            except OracleParseError as exc:
                _diag(diagnostics, "warning", f"polymorphism oracle fault at {stmt.id}: {exc}", stmt)
                continue
            feasible: set[str] = set()
            for name in named:
                t = by_signature.get(str(name).strip())
                if t:
                    feasible.add(t)
            if not feasible:
                _diag(diagnostics, "warning", f"oracle named no known candidate at {stmt.id}", stmt)
                continue
            doomed = {t for t in targets if t not in feasible}
            if not doomed:
                continue
            keys = {(stmt.id, t, CALL, None) for t in doomed}
            out.remove_edges(keys)
            if audit is not None:
                for t in sorted(doomed):
                    audit.append(AuditEntry("remove", CALL, stmt.id, t, "polymorphism"))
    return out


def enhance_reflective_calls(
    g: UnifiedDependencyGraph,
    oracle: ResolutionOracle,
    model: RepoModel,
    diagnostics: DiagnosticSink | None = None,
    audit: list[AuditEntry] | None = None,
) -> UnifiedDependencyGraph:
    """Two-step resolution of reflective invocation sites.

    Successful answers replace the reflective external edge with a call edge
    to the resolved method; any failure keeps the external edge.
    """
    out = g.copy()
    ordered = sorted(
        (n for n in out.nodes.values() if n.calls and not n.synthetic),
        key=lambda n: n.sort_key(),
    )
    class_names = sorted(model.classes)
    for stmt in ordered:
        per_site = site_targets(out, model, stmt)
        for idx, site in enumerate(stmt.calls):
            if not is_invocation_pattern(site):
                continue
            reflective = [
                t
                for t in per_site.get(idx, [])
                if t.startswith("external:") and out.nodes[t].reflective
            ]
            if not reflective:
                continue
            context_nodes, truncated = backward_dataflow_context(out, stmt, set(stmt.uses))
            block = render_statement_block(context_nodes, model)
            if truncated:
                block = "(truncated: oldest definitions omitted)\n" + block
            call_line = _call_statement_line(stmt, model)
            try:
                raw1 = oracle.complete(
                    render_reflection_class_prompt(block, call_line, class_names),
                    site=f"{stmt.id}/reflect{idx}/class",
                )
                answer1 = extract_json_object(raw1)
                cls_name = str(answer1.get("target_class", "")).strip()
            except OracleParseError as exc:
                _diag(diagnostics, "warning", f"reflection class oracle fault at {stmt.id}: {exc}", stmt)
                continue
            cls = model.resolve_class(cls_name) if cls_name else None
            if cls is None:
                _diag(diagnostics, "warning", f"reflection target class '{cls_name}' not in repository", stmt)
                continue
            methods = [model.functions[fid] for fid in cls.methods if not model.functions[fid].is_abstract]
            try:
                raw2 = oracle.complete(
                    render_reflection_method_prompt(
                        block, call_line, [f.signature_text() for f in methods]
                    ),
                    site=f"{stmt.id}/reflect{idx}/method",
                )
                answer2 = extract_json_object(raw2)
                method_name = str(answer2.get("target_method", "")).strip()
            except OracleParseError as exc:
                _diag(diagnostics, "warning", f"reflection method oracle fault at {stmt.id}: {exc}", stmt)
                continue
            matches = [f for f in methods if f.name == method_name or f.signature_text() == method_name]
            if not matches:
                _diag(
                    diagnostics,
                    "warning",
                    f"reflection target method '{method_name}' not in {cls.name}",
                    stmt,
                )
                continue
            resolved = sorted(matches, key=lambda f: f.id)[0]
            for ext in reflective:
                out.remove_edges({(stmt.id, ext, CALL, None)})
                if audit is not None:
                    audit.append(AuditEntry("remove", CALL, stmt.id, ext, "reflection"))
            new_edge = UdgEdge(
                src=stmt.id, dst=resolved.entry, tau=CALL, provenance="enhancement_added"
            )
            out.add_edge(new_edge)
            if audit is not None:
                audit.append(AuditEntry("add", CALL, stmt.id, resolved.entry, "reflection"))
    return out


def reconstruct_labeled_jumps(
    g: UnifiedDependencyGraph,
    targets: list[JumpTarget],
    audit: list[AuditEntry] | None = None,
) -> UnifiedDependencyGraph:
    out = g.copy()
    existing = {e.key() for e in out.edges}
    for t in sorted(targets, key=lambda t: t.jump):
        edge = UdgEdge(
            src=t.jump, dst=t.resolved_successor, tau=CONTROL_FLOW, provenance="enhancement_added"
        )
        if edge.key() in existing:
            continue
        out.add_edge(edge)
        existing.add(edge.key())
        if audit is not None:
            audit.append(AuditEntry("add", CONTROL_FLOW, t.jump, t.resolved_successor, "control_flow"))
    return out


def _diag(diagnostics: DiagnosticSink | None, severity: str, message: str, stmt: StatementNode) -> None:
    if diagnostics is not None:
        diagnostics.add(severity, "enhance", message, stmt.file, stmt.start_line)
