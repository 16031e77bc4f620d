"""Resolution oracles: answer polymorphism/reflection questions from prompts.

Three implementations share one contract: `complete(prompt, site) -> str`.
The deterministic mock infers answers from the prompt text alone (constant
propagation over the dataflow-context lines), the replay oracle reproduces a
recorded transcript bit-exactly, and the recorder wraps any oracle to
produce such transcripts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Protocol

from ..errors import OracleParseError


class ResolutionOracle(Protocol):
    def complete(self, prompt: str, site: str = "") -> str: ...


def extract_json_object(text: str) -> dict:
    """Last balanced JSON object in `text`, string-aware."""
    candidates = []
    depth = 0
    start = -1
    in_str = False
    escape = False
    for i, ch in enumerate(text):
        if in_str:
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}":
            if depth > 0:
                depth -= 1
                if depth == 0 and start >= 0:
                    candidates.append(text[start : i + 1])
    for cand in reversed(candidates):
        try:
            obj = json.loads(cand)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    raise OracleParseError("no JSON object found in oracle response")


# ------------------------------------------------------------------ sections


def _section(prompt: str, header: str) -> str:
    pattern = re.compile(rf"^{re.escape(header)}:\n(.*?)(?=\n\n|\Z)", re.S | re.M)
    m = pattern.search(prompt)
    return m.group(1).strip() if m else ""


def _context_lines(prompt: str) -> list[str]:
    block = _section(prompt, "Dataflow Context")
    lines = []
    for raw in block.splitlines():
        if "|" in raw:
            lines.append(raw.split("|", 1)[1].strip())
        else:
            lines.append(raw.strip())
    return [ln for ln in lines if ln and ln != "(none)"]


def _bullet_list(prompt: str, header: str) -> list[str]:
    return [
        ln.strip()[2:].strip()
        for ln in _section(prompt, header).splitlines()
        if ln.strip().startswith("- ")
    ]


class ConstantFolder:
    """Latest-definition string constant propagation over context lines."""

    ASSIGN = re.compile(r"(?:[\w\[\]<>,.\s]+\s)?([A-Za-z_$][\w$]*)\s*=\s*(.+?);?$")

    def __init__(self, lines: list[str]):
        self.values: dict[str, str] = {}
        for ln in lines:
            m = self.ASSIGN.match(ln.strip())
            if not m:
                continue
            name, rhs = m.group(1), m.group(2)
            value = self.eval_expr(rhs)
            if value is not None:
                self.values[name] = value

    def eval_expr(self, expr: str) -> str | None:
        parts = [p.strip() for p in _split_concat(expr)]
        out = []
        for p in parts:
            if len(p) >= 2 and p.startswith('"') and p.endswith('"'):
                out.append(p[1:-1])
            elif re.fullmatch(r"[A-Za-z_$][\w$]*", p) and p in self.values:
                out.append(self.values[p])
            else:
                return None
        return "".join(out)


def _split_concat(expr: str) -> list[str]:
    parts = []
    depth = 0
    in_str = False
    cur = []
    i = 0
    while i < len(expr):
        ch = expr[i]
        if in_str:
            cur.append(ch)
            if ch == "\\":
                cur.append(expr[i + 1])
                i += 2
                continue
            if ch == '"':
                in_str = False
            i += 1
            continue
        if ch == '"':
            in_str = True
            cur.append(ch)
        elif ch in "([":
            depth += 1
            cur.append(ch)
        elif ch in ")]":
            depth -= 1
            cur.append(ch)
        elif ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


class MockResolutionOracle:
    """Deterministic oracle driven entirely by prompt content.

    Polymorphism: exact intraprocedural constant type propagation; the last
    `receiver = new T(...)` in the dataflow context wins.  Reflection: the
    class comes from the getMethod receiver (own class for getClass()), the
    method from folding the getMethod name argument.
    """

    def complete(self, prompt: str, site: str = "") -> str:
        if "polymorphic call statement" in prompt:
            return self._polymorphic(prompt)
        if "which class is accessed" in prompt:
            return self._reflection_class(prompt)
        if "invoked through reflection" in prompt:
            return self._reflection_method(prompt)
        raise OracleParseError("mock oracle cannot classify prompt")

    def _polymorphic(self, prompt: str) -> str:
        call = _section(prompt, "Polymorphic Call Statement")
        m = re.search(r"([A-Za-z_$][\w$]*)\s*\.\s*[A-Za-z_$][\w$]*\s*\(", call)
        candidates = _bullet_list(prompt, "Candidate Callee Method Signatures")
        receiver = m.group(1) if m else None
        concrete = None
        if receiver:
            pattern = re.compile(
                rf"\b{re.escape(receiver)}\s*=\s*new\s+([A-Za-z_$][\w$]*)"
            )
            for ln in reversed(_context_lines(prompt)):
                hit = pattern.search(ln)
                if hit:
                    concrete = hit.group(1)
                    break
        feasible = candidates
        if concrete:
            narrowed = [
                c for c in candidates if c.split("(")[0].split(".")[-2:][0] == concrete
                or f".{concrete}." in f".{c.split('(')[0]}."
            ]
            if narrowed:
                feasible = narrowed
        return json.dumps({"feasible_targets": feasible})

    def _reflection_class(self, prompt: str) -> str:
        call = _section(prompt, "Reflection API Call Statement")
        lines = _context_lines(prompt)
        classes = _bullet_list(prompt, "Available Classes")
        # A `X.class.getMethod` receiver names the class outright.
        for ln in lines + [call]:
            m = re.search(r"([A-Za-z_$][\w$]*)\s*\.\s*class\s*\.\s*get(?:Declared)?Method", ln)
            if m:
                return json.dumps({"target_class": m.group(1)})
        # getClass().getMethod(...) targets the enclosing class, which the
        # call statement line is qualified with.
        m = re.match(r"([\w.$]+)\.[\w$]+:\d+\|", call)
        if m and any("getClass()" in ln or "getClass ()" in ln for ln in lines + [call]):
            simple = m.group(1).split(".")[-1]
            for c in classes:
                if c == simple or c.endswith("." + simple):
                    return json.dumps({"target_class": c})
        return json.dumps({"target_class": "unknown"})

    def _reflection_method(self, prompt: str) -> str:
        lines = _context_lines(prompt)
        folder = ConstantFolder(lines)
        for ln in reversed(lines):
            m = re.search(r"get(?:Declared)?Method\s*\((.*)\)", ln)
            if m:
                first_arg = _split_top_comma(m.group(1))
                value = folder.eval_expr(first_arg) if first_arg else None
                if value:
                    return json.dumps({"target_method": value})
        return json.dumps({"target_method": "unknown"})


def _split_top_comma(argtext: str) -> str:
    depth = 0
    in_str = False
    for i, ch in enumerate(argtext):
        if in_str:
            if ch == '"' and argtext[i - 1] != "\\":
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return argtext[:i]
    return argtext


@dataclass
class TranscriptRecord:
    site: str
    prompt: str
    response: str

    def as_dict(self) -> dict:
        return {"site": self.site, "prompt": self.prompt, "response": self.response}


@dataclass
class RecordingOracle:
    inner: ResolutionOracle
    records: list[TranscriptRecord] = field(default_factory=list)

    def complete(self, prompt: str, site: str = "") -> str:
        response = self.inner.complete(prompt, site)
        self.records.append(TranscriptRecord(site=site, prompt=prompt, response=response))
        return response

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec.as_dict(), sort_keys=True) + "\n")


class ReplayOracle:
    """Replays a recorded transcript; order-based with site verification."""

    def __init__(self, path: str, strict: bool = True):
        self.records: list[dict] = []
        self.strict = strict
        self.cursor = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self.records.append(json.loads(line))

    def complete(self, prompt: str, site: str = "") -> str:
        if self.cursor >= len(self.records):
            raise OracleParseError(f"transcript exhausted at request {self.cursor} (site {site})")
        rec = self.records[self.cursor]
        self.cursor += 1
        if self.strict and rec.get("site") and site and rec["site"] != site:
            raise OracleParseError(f"transcript site mismatch: {rec['site']} != {site}")
        return rec["response"]
