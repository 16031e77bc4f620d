"""Conservative call graph over the repository.

Static and constructor calls resolve to their exact target.  Instance calls
connect to the receiver's declared-type method plus every override in its
subtypes (the over-approximation later pruned with oracle help).  Reflection
API invocations connect to a synthetic reflective external node, mirroring
the under-approximation a scalable analyzer produces.
"""

from __future__ import annotations

from ..frontend.model import CallSite, FunctionDecl, RepoModel, StatementNode, TypeHierarchy
from .graph import CALL, UdgEdge, make_external_node

REFLECTION_NAMES = frozenset({"forName", "getMethod", "getDeclaredMethod", "invoke", "newInstance"})
REFLECTION_RECEIVER_TYPES = frozenset({"Class", "Method", "Constructor", "Field"})


def is_reflective_site(site: CallSite) -> bool:
    if site.is_constructor:
        return False
    if site.name not in REFLECTION_NAMES:
        return False
    if site.receiver_type and site.receiver_type in REFLECTION_RECEIVER_TYPES:
        return True
    if site.chain.startswith("Class.") or ".class." in site.chain or "getClass()." in site.chain:
        return True
    # Name-based fallback for chained results, e.g. getClass().getMethod(...)
    return site.receiver is None


def is_invocation_pattern(site: CallSite) -> bool:
    """Reflective sites that invoke behavior (vs. look it up)."""
    return site.name in ("invoke", "newInstance")


def resolve_call_site(
    model: RepoModel, hierarchy: TypeHierarchy, owner_class: str, site: CallSite
) -> tuple[list[FunctionDecl], bool]:
    """Returns (in-repo targets, reflective flag when unresolved)."""
    if site.is_constructor:
        cls = model.resolve_class(site.name)
        if cls is not None:
            ctors = model.find_methods(cls.name, cls.simple_name, site.arity)
            return ctors, False
        return [], False

    def dispatch_targets(static_type: str) -> list[FunctionDecl]:
        cls = model.resolve_class(static_type)
        if cls is None:
            return []
        definer = None
        chain = [cls.name] + _supertype_chain(hierarchy, cls.name)
        for cname in chain:
            found = model.find_methods(cname, site.name, site.arity)
            if found:
                definer = (cname, found)
                break
        if definer is None:
            return []
        definer_class, base_methods = definer
        targets: list[FunctionDecl] = list(base_methods)
        allowed = {cls.name, *hierarchy.subtypes_of(cls.name)}
        for sub_class, fid in hierarchy.method_overrides.get(
            (definer_class, site.name, site.arity), []
        ):
            if sub_class in allowed:
                func = model.functions[fid]
                if func not in targets:
                    targets.append(func)
        return targets

    if site.receiver and site.receiver != "this" and site.receiver_type:
        return dispatch_targets(site.receiver_type), False

    if site.receiver == "this" or (site.receiver is None and "." not in site.chain):
        return dispatch_targets(owner_class), False

    # Class-qualified call: X.m(...) resolved statically.
    base = site.chain.split(".")[0]
    cls = model.resolve_class(base)
    if cls is not None:
        chain = [cls.name] + _supertype_chain(hierarchy, cls.name)
        for cname in chain:
            found = model.find_methods(cname, site.name, site.arity)
            if found:
                return found, False
        return [], False
    return [], is_reflective_site(site)


def _supertype_chain(hierarchy: TypeHierarchy, name: str) -> list[str]:
    out: list[str] = []
    work = hierarchy.supertypes_of(name)
    while work:
        cur = work.pop(0)
        if cur in out:
            continue
        out.append(cur)
        work.extend(hierarchy.supertypes_of(cur))
    return out


def build_call_graph(
    model: RepoModel, hierarchy: TypeHierarchy
) -> tuple[list[UdgEdge], dict[str, StatementNode]]:
    """Call edges plus the synthetic external nodes they land on."""
    edges: list[UdgEdge] = []
    externals: dict[str, StatementNode] = {}
    for fid in sorted(model.functions):
        func = model.functions[fid]
        for sid in func.body:
            stmt = model.stmt(sid)
            for site in stmt.calls:
                targets, _ = resolve_call_site(model, hierarchy, func.class_name, site)
                if targets:
                    for t in sorted(targets, key=lambda f: f.id):
                        edges.append(UdgEdge(src=sid, dst=t.entry, tau=CALL))
                    continue
                if site.is_constructor and model.resolve_class(site.name) is not None:
                    continue  # implicit default constructor: nothing to link
                reflective = is_reflective_site(site)
                ext = make_external_node(site.name, site.arity, reflective=reflective)
                externals.setdefault(ext.id, ext)
                edges.append(UdgEdge(src=sid, dst=ext.id, tau=CALL))
    return edges, externals


def site_targets(graph, model: RepoModel, stmt: StatementNode) -> dict[int, list[str]]:
    """Map each call site of a statement to its current edge targets.

    Targets are matched back to sites by callee name and arity; external
    nodes match by their synthetic name.
    """
    out: dict[int, list[str]] = {i: [] for i in range(len(stmt.calls))}
    call_edges = graph.out_edges(stmt.id, CALL)
    for edge in call_edges:
        dst = edge.dst
        matched = False
        for i, site in enumerate(stmt.calls):
            if dst.startswith("external:"):
                if dst == f"external:{site.name}/{site.arity}":
                    out[i].append(dst)
                    matched = True
                    break
            else:
                func = function_of_entry(model, dst)
                if func is not None and func.arity == site.arity and func.name == site.name:
                    out[i].append(dst)
                    matched = True
                    break
        if not matched and stmt.calls:
            out[0].append(dst)
    return out


def function_of_entry(model: RepoModel, entry_id: str) -> FunctionDecl | None:
    stmt = model.statements.get(entry_id)
    if stmt is not None and stmt.kind == "entry" and stmt.owner in model.functions:
        return model.functions[stmt.owner]
    return None
