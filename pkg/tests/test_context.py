import pytest

from conftest import parse_and_build, write_repo

from udgscan.context.holistic import holistic_context, render_context
from udgscan.context.implicit import declaration_context, definition_context, usage_context
from udgscan.context.sinks import find_sensitive_invocations
from udgscan.context.slicing import control_slice, data_slice, explicit_context, merge_slices
from udgscan.enhance.oracle import MockResolutionOracle
from udgscan.enhance.pipeline import enhance_graph
from udgscan.frontend.parser import parse_repository
from udgscan.harness.generate import random_udg
from udgscan.harness.oracles import control_slice_oracle, data_slice_oracle
from udgscan.knowledge import UserSinkSpec, load_starter_kb


def enhanced(repo):
    model, g, diags = parse_and_build(repo)
    result = enhance_graph(model, g, MockResolutionOracle(), diags)
    return model, result.graph


def sink_of(model, g, kb, api_substr):
    invs = find_sensitive_invocations(g, model, kb)
    matches = [i for i in invs if api_substr in i.api]
    assert matches, f"no invocation matching {api_substr}"
    return matches[0]


# ------------------------------------------------------------- invocations


def test_kb_invocation_found(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    invs = find_sensitive_invocations(g, model, kb)
    assert len(invs) == 1
    inv = invs[0]
    assert inv.cwes == ["CWE-74"]
    assert inv.origin == "knowledge_base"
    assert model.stmt(inv.statement).start_line == 11


def test_user_sink_invocations(tmp_path):
    src = """package p;
class Dao {
    int rawQuery(String q) {
        return 1;
    }
}
class App {
    void a(Dao d, String q) {
        int x = d.rawQuery(q);
    }
    void b(Dao d) {
        int y = d.rawQuery("fixed");
    }
    void c(Dao d, String q) {
        int z = d.rawQuery(q + "!");
    }
}
"""
    root = write_repo(tmp_path, {"Dao.java": src})
    model, g = enhanced(root)
    kb = load_starter_kb()
    sink = UserSinkSpec(pattern="Dao.rawQuery", cwe_id="CWE-89")
    invs = find_sensitive_invocations(g, model, kb, [sink])
    assert len(invs) == 3
    assert all(i.origin == "user_sink" and i.cwes == ["CWE-89"] for i in invs)


def test_no_matches_empty(dispatch_repo):
    model, g = enhanced(dispatch_repo)
    invs = find_sensitive_invocations(g, model, load_starter_kb())
    assert invs == []


# ----------------------------------------------------------------- slicing


def test_el_backward_data_slice(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    sl = data_slice(g, g.nodes[inv.statement], "backward")
    assert sl.line_set(g) == {8, 9, 11}
    assert inv.statement in sl.statements


def test_isolated_statement_slice(tmp_path):
    src = """package p;
class A {
    void m() {
        Helper.fire();
    }
}
"""
    root = write_repo(tmp_path, {"A.java": src})
    model, g = enhanced(root)
    stmt = next(s for s in model.statements.values() if s.kind == "call")
    sl = data_slice(g, stmt, "both")
    assert sl.statements == [stmt.id]


@pytest.mark.parametrize("seed", range(10))
def test_slice_equals_closure_oracle(seed):
    g = random_udg(seed, max_nodes=60)
    start = sorted(g.nodes)[seed % len(g.nodes)]
    for direction in ("forward", "backward", "both"):
        mine = set(data_slice(g, g.nodes[start], direction).statements)
        assert mine == data_slice_oracle(g, start, direction)
    for limit in (0, 1, 3):
        mine = set(control_slice(g, g.nodes[start], limit).statements)
        assert mine == control_slice_oracle(g, start, limit)


def test_control_slice_crosses_callers(tmp_path):
    src = """package p;
class Chain {
    static int f(int x) {
        return Ext.sink(x);
    }
    static int g(int x) {
        return f(x);
    }
    static int h(int x) {
        return g(x);
    }
}
"""
    root = write_repo(tmp_path, {"Chain.java": src})
    model, g = enhanced(root)
    sink_stmt = next(s for s in model.statements.values() if any(c.name == "sink" for c in s.calls))
    sl = control_slice(g, sink_stmt, hop_limit=3)
    owners = {g.nodes[sid].owner for sid in sl.statements if not g.nodes[sid].synthetic}
    names = {model.functions[o].name for o in owners if o in model.functions}
    assert names == {"f", "g", "h"}


def test_control_slice_hop_zero_intraprocedural(tmp_path):
    src = """package p;
class Chain {
    static int f(int x) {
        int y = x + 1;
        return y;
    }
    static int g(int x) {
        return f(x);
    }
}
"""
    root = write_repo(tmp_path, {"Chain.java": src})
    model, g = enhanced(root)
    y_def = next(s for s in model.statements.values() if "y = x + 1" in s.text)
    sl = control_slice(g, y_def, hop_limit=0)
    owners = {g.nodes[sid].owner for sid in sl.statements if not g.nodes[sid].synthetic}
    names = {model.functions[o].name for o in owners if o in model.functions}
    assert names == {"f"}


def test_control_slice_truncation_note(tmp_path):
    src = """package p;
class Deep {
    static int a(int x) {
        return Ext.sink(x);
    }
    static int b(int x) {
        return a(x);
    }
    static int c(int x) {
        return b(x);
    }
    static int d(int x) {
        return c(x);
    }
    static int e(int x) {
        return d(x);
    }
    static int f(int x) {
        return e(x);
    }
}
"""
    root = write_repo(tmp_path, {"Deep.java": src})
    model, g = enhanced(root)
    sink_stmt = next(s for s in model.statements.values() if any(c.name == "sink" for c in s.calls))
    sl = control_slice(g, sink_stmt, hop_limit=3)
    owners = {
        model.functions[g.nodes[sid].owner].name
        for sid in sl.statements
        if not g.nodes[sid].synthetic and g.nodes[sid].owner in model.functions
    }
    assert owners == {"a", "b", "c", "d"}  # three call hops up from a
    assert any("truncated" in n for n in sl.boundary_notes)


def test_el_explicit_context(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    sl = explicit_context(g, g.nodes[inv.statement])
    assert sl.line_set(g) == {8, 9, 10, 11}


# ---------------------------------------------------------------- implicit


def test_el_usage_context(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    c_e = explicit_context(g, g.nodes[inv.statement])
    c_use = usage_context(g, model, c_e)
    assert c_use.line_set(g) == set(range(26, 32))
    assert any("external callee" in n for n in c_use.boundary_notes)


def test_usage_context_no_calls_empty(tmp_path):
    src = """package p;
class A {
    int m(int x) {
        int y = x + 1;
        return y;
    }
}
"""
    root = write_repo(tmp_path, {"A.java": src})
    model, g = enhanced(root)
    y_def = next(s for s in model.statements.values() if "y = x + 1" in s.text)
    c_e = explicit_context(g, y_def)
    c_use = usage_context(g, model, c_e)
    assert c_use.line_set(g) == set()


def test_el_definition_context(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    c_e = explicit_context(g, g.nodes[inv.statement])
    c_use = usage_context(g, model, c_e)
    base = merge_slices("base", g, [c_e, c_use])
    c_def = definition_context(g, model, base)
    assert c_def.line_set(g) == {4} | set(range(18, 25))


def test_definition_context_local_branch(tmp_path):
    # An unresolved local with an in-graph definition edge slices locally
    # instead of looking up a global.
    src = """package p;
class A {
    static int GLOBAL = 3;
    int m(int x) {
        int seed = x + GLOBAL;
        int out = seed * 2;
        return out;
    }
}
"""
    root = write_repo(tmp_path, {"A.java": src})
    model, g = enhanced(root)
    out_def = next(s for s in model.statements.values() if "out = seed" in s.text)
    from udgscan.context.slicing import ContextSlice

    base = ContextSlice(kind="explicit", statements=[out_def.id], depths={out_def.id: 0})
    c_def = definition_context(g, model, base)
    seed_def = next(s for s in model.statements.values() if "seed = x" in s.text)
    assert seed_def.id in c_def.statements  # local backward slice, no global lookup
    global_def = next(s for s in model.statements.values() if s.kind == "global_def")
    # Resolution is a single round: globals referenced only by statements the
    # slice itself discovered are not chased further.
    assert global_def.id not in c_def.statements
    # A use with no incoming edge in the *input* set does take the global branch.
    base2 = ContextSlice(kind="explicit", statements=[seed_def.id], depths={seed_def.id: 0})
    c_def2 = definition_context(g, model, base2)
    assert global_def.id in c_def2.statements


def test_fully_resolved_slice_empty_definition_context(tmp_path):
    src = """package p;
class A {
    int m(int x) {
        int y = x + 1;
        return y;
    }
}
"""
    root = write_repo(tmp_path, {"A.java": src})
    model, g = enhanced(root)
    ret = next(s for s in model.statements.values() if s.kind == "return")
    c_e = explicit_context(g, ret)
    c_def = definition_context(g, model, c_e)
    assert c_def.statements == []


def test_el_declaration_context(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    c_e = explicit_context(g, g.nodes[inv.statement])
    c_use = usage_context(g, model, c_e)
    base = merge_slices("base", g, [c_e, c_use])
    c_def = definition_context(g, model, base)
    ids = c_e.statements + c_use.statements + c_def.statements
    c_decl = declaration_context(ids, model)
    assert c_decl.line_set(model) == {1, 17, 33}


def test_declaration_context_two_files(tmp_path):
    files = {
        "A.java": """package p;
class A {
    static int helper(int x) {
        return x + 1;
    }
}
""",
        "B.java": """package p;
import java.util.*;
class B {
    int m(int q) {
        int r = A.helper(q);
        return r;
    }
}
""",
    }
    root = write_repo(tmp_path, files)
    model, g = enhanced(root)
    call_stmt = next(s for s in model.statements.values() if any(c.name == "helper" for c in s.calls))
    c_e = explicit_context(g, call_stmt)
    c_use = usage_context(g, model, c_e)
    ids = c_e.statements + c_use.statements
    c_decl = declaration_context(ids, model)
    files_seen = {model.statements[sid].file for sid in c_decl.statements}
    assert files_seen == {"A.java", "B.java"}


# ---------------------------------------------------------------- holistic


def test_el_holistic_golden(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    ctx = holistic_context(g, model, inv)
    rendered_lines = set(ctx.rendered_lines["TemplateValidator.java"])
    assert rendered_lines == set(range(1, 5)) | set(range(8, 34))
    assert inv.statement in ctx.all
    assert ctx.explicit.line_set(g) <= ctx.all_line_set(model)


def test_holistic_rendered_numbers_match(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    ctx = holistic_context(g, model, inv)
    numbered = [
        int(line.split("|", 1)[0])
        for line in ctx.rendered.splitlines()
        if "|" in line and line.split("|", 1)[0].strip().isdigit()
    ]
    assert numbered == ctx.rendered_lines["TemplateValidator.java"]


def test_sink_without_dependencies(tmp_path):
    src = """package p;
class Lone {
    void m() {
        Runtime.getRuntime().exec("ls");
    }
}
"""
    root = write_repo(tmp_path, {"Lone.java": src})
    model, g = enhanced(root)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "exec")
    ctx = holistic_context(g, model, inv)
    lines = set(ctx.rendered_lines["Lone.java"])
    assert 4 in lines  # the sink itself
    assert 1 in lines and 2 in lines  # package + class declaration context


def test_token_budget_drops_far_statements(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    full = holistic_context(g, model, inv)
    tight = holistic_context(g, model, inv, token_budget=40)
    assert tight.dropped > 0
    assert inv.statement in tight.all
    assert len(tight.all) < len(full.all)
    assert any("token budget" in n for n in tight.boundary_notes)


def test_monotonicity_adding_edges_grows_slices(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    base_slice = set(data_slice(g, g.nodes[inv.statement], "both").statements)
    from udgscan.udg.graph import DATA_DEPENDENCY, UdgEdge

    bigger = g.copy()
    extra_src = next(s for s in model.statements.values() if "cleaned" not in s.text and s.kind == "global_def")
    bigger.add_edge(UdgEdge(src=extra_src.id, dst=inv.statement, tau=DATA_DEPENDENCY, variable="x"))
    grown = set(data_slice(bigger, bigger.nodes[inv.statement], "both").statements)
    assert base_slice <= grown


def test_implicit_idempotence_on_golden(el_repo):
    model, g = enhanced(el_repo)
    kb = load_starter_kb()
    inv = sink_of(model, g, kb, "buildConstraintViolationWithTemplate")
    ctx = holistic_context(g, model, inv)
    from udgscan.context.slicing import ContextSlice

    full = ContextSlice(kind="holistic", statements=list(ctx.all), depths={s: 0 for s in ctx.all})
    again_use = usage_context(g, model, full)
    again_def = definition_context(g, model, merge_slices("b", g, [full, again_use]))
    again_decl = declaration_context(list(ctx.all), model)
    new_ids = (set(again_use.statements) | set(again_def.statements) | set(again_decl.statements)) - set(ctx.all)
    assert new_ids == set()
