"""Verdict parsing and majority-vote aggregation across query rounds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import AllRoundsFailed, ClientTransportError
from .clients import InferenceClient
from .prompt import MetaPrompt

TRANSPORT_RETRIES = 2


@dataclass
class Verdict:
    raw: str
    parse_ok: bool
    is_vulnerable: bool | None = None
    explanation: str = ""


@dataclass
class AggregatedVerdict:
    unit: tuple[str, str]  # (api, cwe)
    invocation: str
    votes: list[Verdict] = field(default_factory=list)
    n_requested: int = 3
    final: bool | None = None
    confidence: float = 0.0
    low_confidence: bool = False

    @property
    def parseable(self) -> list[Verdict]:
        return [v for v in self.votes if v.parse_ok]


def _json_candidates(text: str) -> list[str]:
    out = []
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
                    out.append(text[start : i + 1])
    return out


def parse_verdict(text: str) -> Verdict:
    """Last well-formed JSON object with a boolean `is_vulnerable` wins.

    Tolerates code fences and leading reasoning prose; a non-boolean flag or
    no parsable object yields parse_ok=False and excludes the vote.
    """
    for cand in reversed(_json_candidates(text)):
        try:
            obj = json.loads(cand)
        except json.JSONDecodeError:
            continue
        if not isinstance(obj, dict) or "is_vulnerable" not in obj:
            continue
        flag = obj["is_vulnerable"]
        if not isinstance(flag, bool):
            return Verdict(raw=text, parse_ok=False)
        explanation = obj.get("explanation", "")
        if not isinstance(explanation, str):
            explanation = json.dumps(explanation)
        return Verdict(raw=text, parse_ok=True, is_vulnerable=flag, explanation=explanation)
    return Verdict(raw=text, parse_ok=False)


def query_rounds(client: InferenceClient, prompt: MetaPrompt, n: int) -> list[Verdict]:
    """N independent completions; transient transport errors are retried a
    bounded number of times, then recorded as unparseable votes."""
    if n < 1 or n % 2 == 0:
        raise ValueError("round count must be odd and >= 1")
    votes: list[Verdict] = []
    for i in range(n):
        raw = None
        last_error = ""
        for _ in range(TRANSPORT_RETRIES + 1):
            try:
                raw = client.complete(prompt.text, round_index=i)
                break
            except ClientTransportError as exc:
                last_error = str(exc)
        if raw is None:
            votes.append(Verdict(raw=f"<transport failure: {last_error}>", parse_ok=False))
            continue
        votes.append(parse_verdict(raw))
    return votes


def aggregate_votes(votes: list[Verdict], n_requested: int, unit=("", ""), invocation="") -> AggregatedVerdict:
    """Strict majority over parseable votes; an even split breaks toward
    vulnerable and is flagged low-confidence."""
    agg = AggregatedVerdict(unit=unit, invocation=invocation, votes=votes, n_requested=n_requested)
    parseable = agg.parseable
    if not parseable:
        raise AllRoundsFailed(f"no parseable verdicts for {unit}")
    yes = sum(1 for v in parseable if v.is_vulnerable)
    no = len(parseable) - yes
    if yes > no:
        agg.final = True
    elif no > yes:
        agg.final = False
    else:
        agg.final = True  # safety tie-break: flag for review
        agg.low_confidence = True
    winner_votes = yes if agg.final else no
    agg.confidence = winner_votes / len(parseable)
    if len(parseable) < n_requested:
        agg.low_confidence = True
    return agg
