"""Pipeline orchestration: parse, build, enhance, slice, reason, report."""

from __future__ import annotations

import json
import os
import re
import sys
import time
from dataclasses import dataclass, field

from ..context.holistic import DEFAULT_TOKEN_BUDGET, holistic_context
from ..context.sinks import find_sensitive_invocations
from ..enhance.oracle import MockResolutionOracle, RecordingOracle, ReplayOracle
from ..enhance.pipeline import enhance_graph
from ..errors import (
    AllRoundsFailed,
    ClientTransportError,
    ConfigError,
    DiagnosticSink,
    HierarchyCycle,
    OracleParseError,
)
from ..frontend.analysis import build_type_hierarchy, resolve_label_targets
from ..frontend.parser import FrontendConfig, parse_repository
from ..knowledge import detection_units_for, load_knowledge_base, load_starter_kb, load_user_sinks
from ..reasoning.clients import (
    LiveClientConfig,
    LiveInferenceClient,
    MockInferenceClient,
    TranscriptRecorder,
    TranscriptReplayClient,
)
from ..reasoning.prompt import build_detection_prompt
from ..reasoning.votes import aggregate_votes, query_rounds
from ..udg.build import assemble_original_udg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_ORACLE = 4

RESOLUTION_TRANSCRIPT = "resolution.jsonl"
INFERENCE_TRANSCRIPT = "inference.jsonl"


@dataclass
class ScanConfig:
    repo: str = ""
    kb_path: str | None = None
    sink_path: str | None = None
    hop_limit: int = 3
    n_rounds: int = 3
    oracle_mode: str = "mock"  # "live" | "mock" | "replay"
    transcript_dir: str | None = None
    out_dir: str | None = None
    dump_context: bool = False
    dump_graph: bool = False
    token_budget: int = DEFAULT_TOKEN_BUDGET
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "UDGSCAN_API_KEY"
    temperature: float = 0.7
    seed: int | None = None

    def validate(self) -> None:
        if not self.repo:
            raise ConfigError("a repository path is required")
        if not os.path.isdir(self.repo):
            raise ConfigError(f"repository path does not exist: {self.repo}")
        if self.n_rounds < 1 or self.n_rounds % 2 == 0:
            raise ConfigError("round count must be odd and >= 1")
        if self.hop_limit < 0:
            raise ConfigError("hop limit must be >= 0")
        if self.oracle_mode not in ("live", "mock", "replay"):
            raise ConfigError(f"unknown oracle mode {self.oracle_mode!r}")
        if self.oracle_mode == "replay" and not self.transcript_dir:
            raise ConfigError("replay mode requires a transcript directory")
        if self.oracle_mode == "live" and (not self.endpoint or not self.model):
            raise ConfigError("live mode requires an endpoint and a model name")

    @classmethod
    def from_sources(cls, flag_values: dict, config_file: str | None = None) -> "ScanConfig":
        """Config file values apply wherever a flag was not given."""
        merged: dict = {}
        if config_file:
            with open(config_file, "r", encoding="utf-8") as fh:
                try:
                    merged.update(json.load(fh))
                except json.JSONDecodeError as exc:
                    raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        for key, value in flag_values.items():
            if value is not None:
                merged[key] = value
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = set(merged) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**merged)


@dataclass
class Finding:
    finding_id: str
    file: str
    line: int
    api: str
    cwe: str
    verdict: str  # "vulnerable" | "not_vulnerable" | "undetermined"
    confidence: float
    explanation: str
    context_file: str | None = None
    low_confidence: bool = False
    origin: str = "knowledge_base"

    def as_dict(self) -> dict:
        return {
            "id": self.finding_id,
            "file": self.file,
            "line": self.line,
            "api": self.api,
            "cwe": self.cwe,
            "verdict": self.verdict,
            "confidence": round(self.confidence, 6),
            "explanation": self.explanation,
            "context_file": self.context_file,
            "low_confidence": self.low_confidence,
            "origin": self.origin,
        }


@dataclass
class ScanResult:
    report: dict
    exit_code: int = EXIT_OK
    findings: list[Finding] = field(default_factory=list)
    contexts: dict[str, object] = field(default_factory=dict)
    graph: object = None
    model: object = None
    timings: dict[str, float] = field(default_factory=dict)


def _sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def _make_resolution_oracle(config: ScanConfig):
    if config.oracle_mode == "replay":
        path = os.path.join(config.transcript_dir, RESOLUTION_TRANSCRIPT)
        return ReplayOracle(path), None
    if config.oracle_mode == "live":
        client = LiveInferenceClient(
            LiveClientConfig(
                endpoint=config.endpoint,
                model=config.model,
                api_key_env=config.api_key_env,
                temperature=config.temperature,
                seed=config.seed,
            )
        )

        class _Adapter:
            def complete(self, prompt: str, site: str = "") -> str:
                return client.complete(prompt)

        base = _Adapter()
    else:
        base = MockResolutionOracle()
    if config.transcript_dir:
        recorder = RecordingOracle(base)
        return recorder, recorder
    return base, None


def _make_inference_client(config: ScanConfig):
    if config.oracle_mode == "replay":
        path = os.path.join(config.transcript_dir, INFERENCE_TRANSCRIPT)
        return TranscriptReplayClient(path), None
    if config.oracle_mode == "live":
        base = LiveInferenceClient(
            LiveClientConfig(
                endpoint=config.endpoint,
                model=config.model,
                api_key_env=config.api_key_env,
                temperature=config.temperature,
                seed=config.seed,
            )
        )
    else:
        base = MockInferenceClient()
    if config.transcript_dir:
        recorder = TranscriptRecorder(base)
        return recorder, recorder
    return base, None


def scan(config: ScanConfig, inference_client=None, resolution_oracle=None) -> ScanResult:
    """Run the full pipeline over one repository.

    `inference_client` and `resolution_oracle` override the mode-selected
    implementations (used by tests and the evaluation driver).
    """
    config.validate()
    diagnostics = DiagnosticSink()
    timings: dict[str, float] = {}
    oracle_fault = False

    t0 = time.monotonic()
    model = parse_repository(config.repo, FrontendConfig(), diagnostics)
    try:
        build_type_hierarchy(model, diagnostics)
    except HierarchyCycle as exc:
        diagnostics.add("error", "frontend", str(exc))
        report = _empty_report(config, diagnostics, reason=str(exc))
        return ScanResult(report=report, exit_code=EXIT_PARSE)
    jump_targets = resolve_label_targets(model, diagnostics)
    timings["frontend"] = time.monotonic() - t0

    t0 = time.monotonic()
    g_o = assemble_original_udg(model)
    oracle = resolution_oracle
    oracle_recorder = None
    if oracle is None:
        oracle, oracle_recorder = _make_resolution_oracle(config)
    try:
        enh = enhance_graph(model, g_o, oracle, diagnostics, jump_targets)
    except (OracleParseError, ClientTransportError) as exc:
        diagnostics.add("error", "enhance", f"oracle failure: {exc}")
        report = _empty_report(config, diagnostics, reason=str(exc))
        return ScanResult(report=report, exit_code=EXIT_ORACLE)
    g_e = enh.graph
    timings["graph"] = time.monotonic() - t0

    t0 = time.monotonic()
    warnings: list[str] = []
    kb = load_knowledge_base(config.kb_path, warnings) if config.kb_path else load_starter_kb()
    for w in warnings:
        diagnostics.add("warning", "knowledge", w)
    user_sinks = load_user_sinks(config.sink_path, kb) if config.sink_path else []
    invocations = find_sensitive_invocations(g_e, model, kb, user_sinks)
    contexts = {}
    for inv in invocations:
        contexts[inv.id] = holistic_context(
            g_e, model, inv, hop_limit=config.hop_limit, token_budget=config.token_budget
        )
    timings["context"] = time.monotonic() - t0

    t0 = time.monotonic()
    client = inference_client
    client_recorder = None
    if client is None:
        client, client_recorder = _make_inference_client(config)
    findings: list[Finding] = []
    for inv in invocations:
        ctx = contexts[inv.id]
        stmt = model.stmt(inv.statement)
        for unit in detection_units_for(inv, kb):
            prompt = build_detection_prompt(ctx, unit, kb)
            votes = query_rounds(client, prompt, config.n_rounds)
            try:
                agg = aggregate_votes(votes, config.n_rounds, unit=unit, invocation=inv.statement)
                verdict = "vulnerable" if agg.final else "not_vulnerable"
                confidence = agg.confidence
                low = agg.low_confidence
                explanation = next(
                    (v.explanation for v in agg.parseable if v.is_vulnerable == agg.final), ""
                )
            except AllRoundsFailed:
                oracle_fault = True
                verdict = "undetermined"
                confidence = 0.0
                low = True
                explanation = "all rounds failed to parse"
            findings.append(
                Finding(
                    finding_id=f"{_sanitize(inv.statement)}::{unit[1]}",
                    file=stmt.file,
                    line=stmt.start_line,
                    api=unit[0],
                    cwe=unit[1],
                    verdict=verdict,
                    confidence=confidence,
                    explanation=explanation,
                    context_file=f"{_sanitize(inv.id)}.ctx.txt" if config.dump_context else None,
                    low_confidence=low,
                    origin=inv.origin,
                )
            )
    timings["reasoning"] = time.monotonic() - t0

    report = {
        "schema_version": 1,
        "repo": config.repo,
        "config": {
            "hop_limit": config.hop_limit,
            "n_rounds": config.n_rounds,
            "oracle_mode": config.oracle_mode,
            "token_budget": config.token_budget,
        },
        "stats": {
            "files": len(model.files),
            "functions": len(model.functions),
            "classes": len(model.classes),
            "nodes": len(g_e.nodes),
            "edges": {
                tau: sum(1 for e in g_e.edges if e.tau == tau)
                for tau in ("control_flow", "data_dependency", "call")
            },
            "enhancement": enh.audit_counts(),
            "invocations": len(invocations),
        },
        "diagnostics": diagnostics.as_dicts(),
        "findings": [f.as_dict() for f in findings],
    }

    exit_code = EXIT_OK
    if diagnostics.has_errors():
        exit_code = EXIT_PARSE
    elif oracle_fault:
        exit_code = EXIT_ORACLE

    if config.transcript_dir and config.oracle_mode != "replay":
        os.makedirs(config.transcript_dir, exist_ok=True)
        if oracle_recorder is not None:
            oracle_recorder.save(os.path.join(config.transcript_dir, RESOLUTION_TRANSCRIPT))
        if client_recorder is not None:
            client_recorder.save(os.path.join(config.transcript_dir, INFERENCE_TRANSCRIPT))
    if config.out_dir:
        _write_outputs(config, report, contexts, enh, g_e)
    result = ScanResult(
        report=report,
        exit_code=exit_code,
        findings=findings,
        contexts=contexts,
        graph=g_e,
        model=model,
        timings=timings,
    )
    return result


def _empty_report(config: ScanConfig, diagnostics: DiagnosticSink, reason: str) -> dict:
    return {
        "schema_version": 1,
        "repo": config.repo,
        "fatal": reason,
        "diagnostics": diagnostics.as_dicts(),
        "findings": [],
    }


def _write_outputs(config, report, contexts, enh, g_e) -> None:
    os.makedirs(config.out_dir, exist_ok=True)
    with open(os.path.join(config.out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(config.out_dir, "audit.jsonl"), "w", encoding="utf-8") as fh:
        for entry in enh.audit:
            fh.write(json.dumps(entry.as_dict(), sort_keys=True) + "\n")
    if config.dump_context:
        for inv_id, ctx in contexts.items():
            dest = os.path.join(config.out_dir, f"{_sanitize(inv_id)}.ctx.txt")
            with open(dest, "w", encoding="utf-8") as fh:
                fh.write(ctx.rendered + "\n")
    if config.dump_graph:
        with open(os.path.join(config.out_dir, "udg.txt"), "w", encoding="utf-8") as fh:
            fh.write(g_e.dump())
        with open(os.path.join(config.out_dir, "udg.dot"), "w", encoding="utf-8") as fh:
            fh.write(g_e.to_dot())


def print_diagnostics(result: ScanResult, stream=None) -> None:
    stream = stream or sys.stderr
    for d in result.report.get("diagnostics", []):
        loc = f"{d['path']}:{d['line']}: " if d.get("path") else ""
        print(f"[{d['severity']}] {d['module']}: {loc}{d['message']}", file=stream)
