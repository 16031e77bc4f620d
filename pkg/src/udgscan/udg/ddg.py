"""Reaching-definitions data-dependency edges (flow-sensitive, intraprocedural).

For each use of v at statement s, an edge d -> s is produced for every
definition d of v that reaches s along some control-flow path with no
intervening redefinition.  Definition-use, not definition-definition.
"""

from __future__ import annotations

from ..frontend.model import FunctionDecl, RepoModel
from .graph import DATA_DEPENDENCY, UdgEdge


def build_ddg(func: FunctionDecl, model: RepoModel, cfg_edges: list[UdgEdge]) -> list[UdgEdge]:
    nodes = [func.entry] + list(func.body) + [func.exit]
    node_set = set(nodes)
    preds: dict[str, list[str]] = {n: [] for n in nodes}
    succs: dict[str, list[str]] = {n: [] for n in nodes}
    for e in cfg_edges:
        if e.src in node_set and e.dst in node_set:
            preds[e.dst].append(e.src)
            succs[e.src].append(e.dst)

    gen: dict[str, set[tuple[str, str]]] = {}
    defs_of: dict[str, set[str]] = {}
    for n in nodes:
        stmt = model.stmt(n)
        gen[n] = {(v, n) for v in stmt.defs}
        defs_of[n] = set(stmt.defs)

    out: dict[str, set[tuple[str, str]]] = {n: set() for n in nodes}
    inn: dict[str, set[tuple[str, str]]] = {n: set() for n in nodes}
    work = list(nodes)
    while work:
        n = work.pop(0)
        in_set: set[tuple[str, str]] = set()
        for p in preds[n]:
            in_set |= out[p]
        inn[n] = in_set
        killed = defs_of[n]
        new_out = gen[n] | {(v, d) for (v, d) in in_set if v not in killed}
        if new_out != out[n]:
            out[n] = new_out
            for s in succs[n]:
                if s not in work:
                    work.append(s)

    edges: list[UdgEdge] = []
    for n in nodes:
        stmt = model.stmt(n)
        if not stmt.uses:
            continue
        for v in sorted(stmt.uses):
            for (var, d) in sorted(inn[n]):
                if var == v:
                    edges.append(UdgEdge(src=d, dst=n, tau=DATA_DEPENDENCY, variable=v))
    return edges
