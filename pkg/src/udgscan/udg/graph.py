"""Unified dependency graph: statement nodes plus typed directed edges."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..frontend.model import StatementNode

CONTROL_FLOW = "control_flow"
DATA_DEPENDENCY = "data_dependency"
CALL = "call"
EDGE_TYPES = (CONTROL_FLOW, DATA_DEPENDENCY, CALL)


@dataclass(frozen=True)
class UdgEdge:
    src: str
    dst: str
    tau: str
    provenance: str = "original"  # "original" | "enhancement_added"
    variable: str | None = None

    def key(self) -> tuple:
        return (self.src, self.dst, self.tau, self.variable)


@dataclass
class UnifiedDependencyGraph:
    nodes: dict[str, StatementNode] = field(default_factory=dict)
    edges: list[UdgEdge] = field(default_factory=list)
    state: str = "original"  # "original" | "enhanced"
    _out: dict[str, list[UdgEdge]] | None = None
    _in: dict[str, list[UdgEdge]] | None = None

    def add_node(self, node: StatementNode) -> None:
        self.nodes[node.id] = node
        self._out = self._in = None

    def add_edge(self, edge: UdgEdge) -> None:
        self.edges.append(edge)
        self._out = self._in = None

    def remove_edges(self, keys: set[tuple]) -> int:
        before = len(self.edges)
        self.edges = [e for e in self.edges if e.key() not in keys]
        self._out = self._in = None
        return before - len(self.edges)

    def _index(self) -> None:
        if self._out is not None:
            return
        out: dict[str, list[UdgEdge]] = {}
        inc: dict[str, list[UdgEdge]] = {}
        for e in self.edges:
            out.setdefault(e.src, []).append(e)
            inc.setdefault(e.dst, []).append(e)
        self._out = out
        self._in = inc

    def out_edges(self, node: str, tau: str | None = None) -> list[UdgEdge]:
        self._index()
        edges = self._out.get(node, [])
        return [e for e in edges if tau is None or e.tau == tau]

    def in_edges(self, node: str, tau: str | None = None) -> list[UdgEdge]:
        self._index()
        edges = self._in.get(node, [])
        return [e for e in edges if tau is None or e.tau == tau]

    def edges_of(self, tau: str) -> list[UdgEdge]:
        return [e for e in self.edges if e.tau == tau]

    def copy(self, state: str | None = None) -> "UnifiedDependencyGraph":
        return UnifiedDependencyGraph(
            nodes=dict(self.nodes),
            edges=list(self.edges),
            state=state or self.state,
        )

    def has_edge(self, src: str, dst: str, tau: str) -> bool:
        return any(e.src == src and e.dst == dst and e.tau == tau for e in self.edges)

    def sorted_edges(self) -> list[UdgEdge]:
        return sorted(self.edges, key=lambda e: (e.src, e.dst, e.tau, e.variable or ""))

    def dump(self) -> str:
        """Line-oriented text dump with stable ordering."""
        lines = []
        ordered = sorted(
            self.nodes.values(), key=lambda n: (n.file, n.start_line, n.id)
        )
        for n in ordered:
            lines.append(f"NODE {n.id} {n.file}:{n.start_line}-{n.end_line} {n.kind}")
        for e in self.sorted_edges():
            var = f" {e.variable}" if e.variable else ""
            lines.append(f"EDGE {e.src} {e.dst} {e.tau}{var}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        """Graph-description export for visualization tooling."""
        style = {CONTROL_FLOW: "solid", DATA_DEPENDENCY: "dashed", CALL: "bold"}
        out = ["digraph udg {"]
        for n in sorted(self.nodes.values(), key=lambda n: (n.file, n.start_line, n.id)):
            label = f"{n.file}:{n.start_line} {n.kind}".replace('"', "'")
            out.append(f'  "{n.id}" [label="{label}"];')
        for e in self.sorted_edges():
            lab = e.variable or ""
            out.append(f'  "{e.src}" -> "{e.dst}" [style={style[e.tau]}, label="{lab}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def make_external_node(name: str, arity: int, reflective: bool = False) -> StatementNode:
    """Synthetic callee node for a call that cannot be resolved in-repo."""
    node = StatementNode(
        id=f"external:{name}/{arity}",
        file="<external>",
        start_line=0,
        end_line=0,
        kind="entry",
        text=f"{name}/{arity}",
        owner="external",
        synthetic=True,
        external=True,
        reflective=reflective,
    )
    return node


def edge_replaced(edge: UdgEdge, **kw) -> UdgEdge:
    return replace(edge, **kw)
