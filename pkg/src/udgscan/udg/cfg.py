"""Intra-procedural control-flow construction over structured statements.

Labeled break/continue deliberately receive no outgoing edges here; the
enhancement stage reconstructs them.  Unlabeled jumps, loops, switches with
fallthrough, and try/finally normal flow are wired directly.
"""

from __future__ import annotations

from ..frontend import syntax as syn
from ..frontend.model import FunctionDecl, RepoModel
from .graph import CONTROL_FLOW, UdgEdge


def build_cfg(func: FunctionDecl, model: RepoModel) -> list[UdgEdge]:
    body = model.bodies.get(func.id, [])
    builder = _CfgBuilder(func)
    head = builder.wire_list(body, func.exit, None, None)
    builder.edge(func.entry, head)
    seen: set[tuple] = set()
    out: list[UdgEdge] = []
    for e in builder.edges:
        if e.key() not in seen:
            seen.add(e.key())
            out.append(e)
    return out


class _CfgBuilder:
    def __init__(self, func: FunctionDecl):
        self.func = func
        self.edges: list[UdgEdge] = []

    def edge(self, src: str, dst: str) -> None:
        self.edges.append(UdgEdge(src=src, dst=dst, tau=CONTROL_FLOW))

    def wire_list(self, stmts: list, succ: str, brk: str | None, cnt: str | None) -> str:
        """Wire a statement list; returns its entry node (succ when empty)."""
        head = succ
        for stmt in reversed(stmts):
            head = self.wire(stmt, head, brk, cnt)
        return head

    def wire(self, stmt, succ: str, brk: str | None, cnt: str | None) -> str:
        if isinstance(stmt, syn.Simple):
            self.edge(stmt.node, succ)
            return stmt.node
        if isinstance(stmt, syn.Return):
            self.edge(stmt.node, self.func.exit)
            return stmt.node
        if isinstance(stmt, syn.Jump):
            if stmt.label:
                return stmt.node  # left broken; reconstructed during enhancement
            if stmt.kind == "break" and brk is not None:
                self.edge(stmt.node, brk)
            elif stmt.kind == "continue" and cnt is not None:
                self.edge(stmt.node, cnt)
            elif stmt.kind == "throw":
                self.edge(stmt.node, self.func.exit)
            return stmt.node
        if isinstance(stmt, syn.Block):
            return self.wire_list(stmt.stmts, succ, brk, cnt)
        if isinstance(stmt, syn.If):
            h_then = self.wire_list(stmt.then, succ, brk, cnt)
            h_else = self.wire_list(stmt.orelse, succ, brk, cnt)
            self.edge(stmt.cond, h_then)
            self.edge(stmt.cond, h_else)
            return stmt.cond
        if isinstance(stmt, syn.While):
            h_body = self.wire_list(stmt.body, stmt.cond, succ, stmt.cond)
            self.edge(stmt.cond, h_body)
            self.edge(stmt.cond, succ)
            return stmt.cond
        if isinstance(stmt, syn.DoWhile):
            h_body = self.wire_list(stmt.body, stmt.cond, succ, stmt.cond)
            self.edge(stmt.cond, h_body)
            self.edge(stmt.cond, succ)
            return h_body
        if isinstance(stmt, syn.For):
            body_head_syntactic = syn.head_of_list(stmt.body)
            next_iter = stmt.update or stmt.cond or body_head_syntactic or succ
            h_body = self.wire_list(stmt.body, next_iter, succ, next_iter)
            if stmt.update:
                self.edge(stmt.update, stmt.cond or h_body)
            if stmt.cond:
                self.edge(stmt.cond, h_body)
                self.edge(stmt.cond, succ)
            loop_entry = stmt.cond or h_body
            if stmt.init:
                self.edge(stmt.init, loop_entry)
                return stmt.init
            return loop_entry
        if isinstance(stmt, syn.ForEach):
            h_body = self.wire_list(stmt.body, stmt.header, succ, stmt.update)
            self.edge(stmt.header, stmt.update)
            self.edge(stmt.update, h_body)
            self.edge(stmt.header, succ)
            return stmt.header
        if isinstance(stmt, syn.Switch):
            has_default = any(is_default for is_default, _ in stmt.cases)
            next_head = succ
            heads: list[str] = []
            for _, case_stmts in reversed(stmt.cases):
                next_head = self.wire_list(case_stmts, next_head, succ, cnt)
                heads.append(next_head)
            for h in reversed(heads):
                self.edge(stmt.selector, h)
            if not has_default:
                self.edge(stmt.selector, succ)
            return stmt.selector
        if isinstance(stmt, syn.Labeled):
            h_inner = self.wire(stmt.inner, succ, brk, cnt) if stmt.inner else succ
            self.edge(stmt.label_node, h_inner)
            return stmt.label_node
        if isinstance(stmt, syn.Try):
            h_fin = self.wire_list(stmt.finally_, succ, brk, cnt) if stmt.finally_ else succ
            h_body = self.wire_list(stmt.body, h_fin, brk, cnt)
            for catch_stmts in stmt.catches:
                # Parsed but not reachable: exceptional edges are not modeled.
                self.wire_list(catch_stmts, h_fin, brk, cnt)
            return h_body
        raise TypeError(f"unknown statement form: {type(stmt).__name__}")


def unreachable_nodes(func: FunctionDecl, model: RepoModel, cfg_edges: list[UdgEdge]) -> list[str]:
    """Body nodes not reachable from entry (unreachable-code diagnostics)."""
    succ: dict[str, list[str]] = {}
    for e in cfg_edges:
        succ.setdefault(e.src, []).append(e.dst)
    seen = {func.entry}
    work = [func.entry]
    while work:
        cur = work.pop()
        for nxt in succ.get(cur, []):
            if nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
    return [sid for sid in func.body if sid not in seen]
