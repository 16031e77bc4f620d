"""Statement-level intermediate representation of a parsed repository.

A repository is modelled as a flat collection of statement nodes plus the
structural facts (classes, functions, globals, type hierarchy) that the graph
construction and enhancement passes need.  Statements carry verbatim source
text, 1-based inclusive line spans, and purely syntactic def/use sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Statement kinds.  A statement whose expression performs a method invocation
# is classified as "call" unless a more specific kind (return, condition,
# loop_header, jump) applies; such statements still carry call metadata.
KINDS = (
    "declaration",
    "assignment",
    "call",
    "return",
    "condition",
    "loop_header",
    "jump",
    "label",
    "entry",
    "exit",
    "global_def",
    "import_decl",
    "package_decl",
    "class_decl",
)

RETURN_VAR = "<ret>"


@dataclass
class CallSite:
    """One method/constructor invocation inside a statement's expression."""

    chain: str  # literal callee chain as written, e.g. "page.append"
    name: str  # simple method name, e.g. "append"
    arity: int
    receiver: str | None = None  # receiver variable name when the base is a known variable
    receiver_type: str | None = None  # declared type of the receiver variable, if known
    arg_vars: list[set[str]] = field(default_factory=list)  # known variables per argument
    is_constructor: bool = False

    def qualified_candidates(self) -> list[str]:
        """Qualified names this call can be matched under (most specific first)."""
        cands = []
        if self.is_constructor:
            cands.append(f"{self.name}.{self.name}")
        if self.receiver_type:
            cands.append(f"{self.receiver_type}.{self.name}")
        if self.chain and self.chain != self.name and not self.chain.startswith("new "):
            cands.append(self.chain)
        return cands


@dataclass
class StatementNode:
    id: str
    file: str
    start_line: int
    end_line: int
    kind: str
    text: str  # full source lines covering the span
    owner: str  # function id or "global"
    defs: set[str] = field(default_factory=set)
    uses: set[str] = field(default_factory=set)
    calls: list[CallSite] = field(default_factory=list)
    code: str = ""  # exact token slice of this statement
    synthetic: bool = False  # entry/exit/external nodes carry no renderable span
    external: bool = False
    reflective: bool = False
    jump_kind: str = ""  # "break" | "continue" for kind == "jump"
    jump_label: str = ""  # label name for labeled jumps, "" when unlabeled

    @property
    def line_span(self) -> tuple[int, int]:
        return (self.start_line, self.end_line)

    def span_lines(self) -> range:
        return range(self.start_line, self.end_line + 1)

    def sort_key(self) -> tuple:
        return (self.file, self.start_line, self.id)


@dataclass
class FunctionDecl:
    id: str
    class_name: str  # fully qualified owner class
    name: str
    param_types: list[str] = field(default_factory=list)
    return_type: str = "void"
    params: list[str] = field(default_factory=list)
    body: list[str] = field(default_factory=list)  # statement ids in source order
    entry: str = ""
    exit: str = ""
    return_var: str = RETURN_VAR
    is_abstract: bool = False
    var_types: dict[str, str] = field(default_factory=dict)  # declared types of params/locals
    sig_line: int = 0
    file: str = ""

    @property
    def signature(self) -> tuple[str, str, tuple[str, ...], str]:
        return (self.class_name, self.name, tuple(self.param_types), self.return_type)

    def signature_text(self) -> str:
        return f"{self.class_name}.{self.name}({', '.join(self.param_types)})"

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class GlobalDecl:
    statement: str  # StatementNode id
    variable: str | None = None  # present iff kind == global_def
    rhs_uses: set[str] = field(default_factory=set)
    class_name: str = ""  # enclosing class for field definitions
    declared_type: str = ""


@dataclass
class ClassDecl:
    name: str  # fully qualified
    simple_name: str
    supertypes: list[str] = field(default_factory=list)  # as written (extends + implements)
    methods: list[str] = field(default_factory=list)  # FunctionDecl ids
    fields: list[str] = field(default_factory=list)  # statement ids of global_defs
    decl_statement: str = ""  # class_decl StatementNode id
    is_top_level: bool = True
    enclosing: str | None = None
    file: str = ""
    body_span: tuple[int, int] = (0, 0)  # header line .. closing brace line


@dataclass
class TypeHierarchy:
    edges: list[tuple[str, str]] = field(default_factory=list)  # (subtype, supertype) fqn pairs
    external_supertypes: set[str] = field(default_factory=set)
    # (class fqn, method name, arity) -> list of (subtype fqn, function id) overrides
    method_overrides: dict[tuple[str, str, int], list[tuple[str, str]]] = field(default_factory=dict)

    def supertypes_of(self, name: str) -> list[str]:
        return [sup for sub, sup in self.edges if sub == name]

    def subtypes_of(self, name: str) -> list[str]:
        """All transitive subtypes, in deterministic order."""
        direct = {}
        for sub, sup in self.edges:
            direct.setdefault(sup, []).append(sub)
        seen: list[str] = []
        work = list(direct.get(name, []))
        while work:
            cur = work.pop(0)
            if cur in seen:
                continue
            seen.append(cur)
            work.extend(direct.get(cur, []))
        return seen


@dataclass
class JumpTarget:
    jump: str  # StatementNode id of the labeled break/continue
    label: str
    target_construct: str  # StatementNode id of the labeled construct's head
    resolved_successor: str  # StatementNode id the reconstructed edge points to


@dataclass
class SourceFile:
    path: str
    text: str
    lines: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.lines:
            self.lines = self.text.split("\n")

    def slice_lines(self, start: int, end: int) -> str:
        return "\n".join(self.lines[start - 1 : end])


@dataclass
class RepoModel:
    root: str
    files: list[SourceFile] = field(default_factory=list)
    functions: dict[str, FunctionDecl] = field(default_factory=dict)
    classes: dict[str, ClassDecl] = field(default_factory=dict)
    globals: list[GlobalDecl] = field(default_factory=list)
    statements: dict[str, StatementNode] = field(default_factory=dict)
    hierarchy: TypeHierarchy = field(default_factory=TypeHierarchy)
    bodies: dict[str, list] = field(default_factory=dict)  # function id -> structured statements
    diagnostics: object = None  # DiagnosticSink attached by parse_repository

    def stmt(self, sid: str) -> StatementNode:
        return self.statements[sid]

    def file_by_path(self, path: str) -> SourceFile | None:
        for f in self.files:
            if f.path == path:
                return f
        return None

    def class_by_simple_name(self, simple: str) -> ClassDecl | None:
        hits = [c for c in self.classes.values() if c.simple_name == simple]
        if len(hits) == 1:
            return hits[0]
        return None

    def resolve_class(self, name: str) -> ClassDecl | None:
        if name in self.classes:
            return self.classes[name]
        return self.class_by_simple_name(name.split(".")[-1])

    def functions_of(self, class_name: str) -> list[FunctionDecl]:
        cls = self.classes.get(class_name)
        if not cls:
            return []
        return [self.functions[fid] for fid in cls.methods]

    def find_methods(self, class_name: str, method: str, arity: int) -> list[FunctionDecl]:
        return [
            f
            for f in self.functions_of(class_name)
            if f.name == method and f.arity == arity
        ]

    def sorted_statements(self) -> list[StatementNode]:
        return sorted(self.statements.values(), key=lambda s: s.sort_key())
