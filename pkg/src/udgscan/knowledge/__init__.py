"""Knowledge base: sensitive APIs mapped to CWE types and per-CWE guideline
text (vulnerability patterns and defense knowledge) used by the meta-prompt.

File format: one JSON document `{"guidelines": [...], "apis": [...]}`.
Signature matching is qualified-suffix based (`exec` matches
`java.lang.Runtime.exec`) with an optional arity pin.
"""

from __future__ import annotations

import importlib.resources
import json
import re
from dataclasses import dataclass, field

from ..errors import MissingGuideline, SchemaError

CWE_ID_RE = re.compile(r"^CWE-\d+$")


@dataclass
class CweGuideline:
    cwe_id: str
    title: str
    vuln_patterns: str
    defense_knowledge: str

    def as_dict(self) -> dict:
        return {
            "cwe_id": self.cwe_id,
            "title": self.title,
            "vuln_patterns": self.vuln_patterns,
            "defense_knowledge": self.defense_knowledge,
        }


@dataclass
class KbEntry:
    api: str  # qualified pattern, optionally dotted
    cwes: list[str] = field(default_factory=list)
    arity: int | None = None

    def as_dict(self) -> dict:
        out = {"api": self.api, "cwes": list(self.cwes)}
        if self.arity is not None:
            out["arity"] = self.arity
        return out


@dataclass
class UserSinkSpec:
    pattern: str  # function signature pattern, e.g. "MyDao.rawQuery"
    cwe_id: str
    arity: int | None = None
    guideline: CweGuideline | None = None

    def matches_function(self, func) -> bool:
        if self.arity is not None and func.arity != self.arity:
            return False
        qualified = f"{func.class_name}.{func.name}"
        return suffix_match(self.pattern, qualified) or suffix_match(self.pattern, func.name)


def suffix_match(pattern: str, candidate: str) -> bool:
    """Dotted-suffix equality in either direction over trailing segments."""
    p = pattern.split(".")
    c = candidate.split(".")
    n = min(len(p), len(c))
    return n > 0 and p[-n:] == c[-n:]


@dataclass
class KnowledgeBase:
    entries: list[KbEntry] = field(default_factory=list)
    guidelines: dict[str, CweGuideline] = field(default_factory=dict)

    def guideline_for(self, cwe_id: str) -> CweGuideline:
        if cwe_id not in self.guidelines:
            raise MissingGuideline(f"no guideline for {cwe_id}")
        return self.guidelines[cwe_id]

    def match_call(self, candidates: list[str], arity: int) -> list[KbEntry]:
        hits: list[KbEntry] = []
        for entry in self.entries:
            if entry.arity is not None and entry.arity != arity:
                continue
            if any(suffix_match(entry.api, cand) for cand in candidates):
                hits.append(entry)
        return hits

    def dump(self) -> dict:
        return {
            "guidelines": [g.as_dict() for g in sorted(self.guidelines.values(), key=lambda g: g.cwe_id)],
            "apis": [e.as_dict() for e in self.entries],
        }


def _require(doc: dict, key: str, typ, where: str):
    if key not in doc:
        raise SchemaError(f"{where}.{key}", "missing required field")
    value = doc[key]
    if not isinstance(value, typ):
        raise SchemaError(f"{where}.{key}", f"expected {typ.__name__}")
    return value


def parse_knowledge_base(doc: dict, warnings: list[str] | None = None) -> KnowledgeBase:
    kb = KnowledgeBase()
    guidelines = _require(doc, "guidelines", list, "kb")
    for i, g in enumerate(guidelines):
        where = f"kb.guidelines[{i}]"
        cwe_id = _require(g, "cwe_id", str, where)
        if not CWE_ID_RE.match(cwe_id):
            raise SchemaError(f"{where}.cwe_id", f"malformed CWE id {cwe_id!r}")
        title = _require(g, "title", str, where)
        vuln = _require(g, "vuln_patterns", str, where)
        defense = _require(g, "defense_knowledge", str, where)
        if not vuln.strip() or not defense.strip() or not title.strip():
            raise SchemaError(where, "guideline text blocks must be non-empty")
        kb.guidelines[cwe_id] = CweGuideline(cwe_id, title, vuln, defense)
    apis = _require(doc, "apis", list, "kb")
    seen: dict[tuple[str, int | None], KbEntry] = {}
    for i, a in enumerate(apis):
        where = f"kb.apis[{i}]"
        api = _require(a, "api", str, where)
        cwes = _require(a, "cwes", list, where)
        if not cwes:
            raise SchemaError(f"{where}.cwes", "at least one CWE per entry")
        arity = a.get("arity")
        if arity is not None and not isinstance(arity, int):
            raise SchemaError(f"{where}.arity", "arity must be an integer")
        for cwe in cwes:
            if cwe not in kb.guidelines:
                raise SchemaError(f"{where}.cwes", f"unknown guideline {cwe}")
        key = (api, arity)
        if key in seen:
            if warnings is not None:
                warnings.append(f"duplicate api {api}: entries merged")
            for cwe in cwes:
                if cwe not in seen[key].cwes:
                    seen[key].cwes.append(cwe)
            continue
        entry = KbEntry(api=api, cwes=list(cwes), arity=arity)
        seen[key] = entry
        kb.entries.append(entry)
    return kb


def load_knowledge_base(path: str, warnings: list[str] | None = None) -> KnowledgeBase:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("kb", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("kb", "document root must be an object")
    return parse_knowledge_base(doc, warnings)


def load_starter_kb() -> KnowledgeBase:
    """The shipped seed knowledge base (not an industrial-scale catalog)."""
    data = importlib.resources.files("udgscan.knowledge").joinpath("data/starter_kb.json")
    return parse_knowledge_base(json.loads(data.read_text(encoding="utf-8")))


def load_user_sinks(path: str, kb: KnowledgeBase) -> list[UserSinkSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("sinks", f"not valid JSON: {exc}") from exc
    sinks_doc = _require(doc, "sinks", list, "sinks")
    out: list[UserSinkSpec] = []
    for i, s in enumerate(sinks_doc):
        where = f"sinks[{i}]"
        pattern = _require(s, "function", str, where)
        cwe_id = _require(s, "cwe_id", str, where)
        arity = s.get("arity")
        guideline = None
        if "guideline" in s:
            g = s["guideline"]
            guideline = CweGuideline(
                cwe_id=cwe_id,
                title=_require(g, "title", str, f"{where}.guideline"),
                vuln_patterns=_require(g, "vuln_patterns", str, f"{where}.guideline"),
                defense_knowledge=_require(g, "defense_knowledge", str, f"{where}.guideline"),
            )
            kb.guidelines.setdefault(cwe_id, guideline)
        elif cwe_id not in kb.guidelines:
            raise MissingGuideline(f"{where}: {cwe_id} has no guideline and no inline override")
        out.append(UserSinkSpec(pattern=pattern, cwe_id=cwe_id, arity=arity, guideline=guideline))
    return out


def detection_units_for(inv, kb: KnowledgeBase) -> list[tuple[str, str]]:
    """One (api, cwe) detection unit per vulnerability type mapped to the
    invocation's API."""
    units = []
    for cwe in inv.cwes:
        if cwe not in kb.guidelines:
            raise MissingGuideline(f"{inv.api}: no guideline for {cwe}")
        units.append((inv.api, cwe))
    return units


__all__ = [
    "CweGuideline",
    "KbEntry",
    "KnowledgeBase",
    "UserSinkSpec",
    "detection_units_for",
    "load_knowledge_base",
    "load_starter_kb",
    "load_user_sinks",
    "parse_knowledge_base",
    "suffix_match",
]
