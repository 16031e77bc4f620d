"""Sensitive-invocation collection over the enhanced graph."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.model import RepoModel
from ..udg.graph import CALL, UnifiedDependencyGraph


@dataclass
class SensitiveInvocation:
    statement: str
    api: str
    cwes: list[str] = field(default_factory=list)
    origin: str = "knowledge_base"  # "knowledge_base" | "user_sink"

    @property
    def id(self) -> str:
        return f"{self.statement}::{self.api}"


def find_sensitive_invocations(
    g: UnifiedDependencyGraph,
    model: RepoModel,
    kb,
    user_sinks: list | None = None,
) -> list[SensitiveInvocation]:
    """Every call statement matching a knowledge-base API or a user sink.

    User sinks are matched against in-repo function signatures; the call
    sites of the matched functions become invocations.
    """
    if g.state != "enhanced":
        raise ValueError("sensitive invocations are collected on the enhanced graph")
    found: dict[tuple[str, str], SensitiveInvocation] = {}
    for stmt in sorted(
        (n for n in g.nodes.values() if n.calls and not n.synthetic), key=lambda n: n.sort_key()
    ):
        for site in stmt.calls:
            entries = kb.match_call(site.qualified_candidates(), site.arity)
            if not entries and site.receiver_type is None and not site.is_constructor:
                # No type information at all: match the bare method name.
                entries = kb.match_call([site.name], site.arity)
            for entry in entries:
                key = (stmt.id, entry.api)
                if key not in found:
                    found[key] = SensitiveInvocation(
                        statement=stmt.id,
                        api=entry.api,
                        cwes=list(entry.cwes),
                        origin="knowledge_base",
                    )
    for sink in user_sinks or []:
        for fid in sorted(model.functions):
            func = model.functions[fid]
            if not sink.matches_function(func):
                continue
            for e in g.edges_of(CALL):
                if e.dst != func.entry:
                    continue
                src = g.nodes.get(e.src)
                if src is None or src.synthetic:
                    continue
                key = (src.id, sink.pattern)
                if key not in found:
                    found[key] = SensitiveInvocation(
                        statement=src.id,
                        api=sink.pattern,
                        cwes=[sink.cwe_id],
                        origin="user_sink",
                    )
    callee_name = lambda inv: inv.api  # noqa: E731
    ordered = sorted(
        found.values(),
        key=lambda inv: (g.nodes[inv.statement].sort_key(), callee_name(inv)),
    )
    return ordered
