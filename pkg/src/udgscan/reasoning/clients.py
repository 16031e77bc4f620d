"""Inference clients: live HTTP, deterministic mocks, and transcript replay."""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Callable, Protocol

from ..errors import ClientTransportError, ConfigError

DEFAULT_TEMPERATURE = 0.7  # vote diversity across rounds


class InferenceClient(Protocol):
    def complete(self, prompt: str, round_index: int = 0) -> str: ...


@dataclass
class MockInferenceClient:
    """Deterministic client for offline runs and tests.

    With a script, responses are served in call order; with a responder
    function, the response is a pure function of (prompt, round).  The
    default always votes non-vulnerable.
    """

    script: list[str] | None = None
    responder: Callable[[str, int], str] | None = None
    _cursor: int = 0

    def complete(self, prompt: str, round_index: int = 0) -> str:
        if self.responder is not None:
            return self.responder(prompt, round_index)
        if self.script is not None:
            if self._cursor >= len(self.script):
                raise ClientTransportError("mock script exhausted")
            out = self.script[self._cursor]
            self._cursor += 1
            return out
        return json.dumps(
            {
                "explanation": "Mock review found no satisfied trigger condition.",
                "is_vulnerable": False,
            }
        )


@dataclass
class TranscriptRecorder:
    inner: InferenceClient
    records: list[dict] = field(default_factory=list)

    def complete(self, prompt: str, round_index: int = 0) -> str:
        response = self.inner.complete(prompt, round_index)
        self.records.append({"round": round_index, "prompt": prompt, "response": response})
        return response

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


class TranscriptReplayClient:
    """Replays recorded responses in order, for bit-exact reproduction."""

    def __init__(self, path: str):
        self.records: list[dict] = []
        self.cursor = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self.records.append(json.loads(line))

    def complete(self, prompt: str, round_index: int = 0) -> str:
        if self.cursor >= len(self.records):
            raise ClientTransportError(f"inference transcript exhausted at request {self.cursor}")
        rec = self.records[self.cursor]
        self.cursor += 1
        return rec["response"]


@dataclass
class LiveClientConfig:
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "UDGSCAN_API_KEY"
    timeout: float = 120.0
    retries: int = 2
    temperature: float = DEFAULT_TEMPERATURE
    seed: int | None = None


class LiveInferenceClient:
    """Minimal chat-completion HTTP client behind the InferenceClient contract."""

    def __init__(self, config: LiveClientConfig):
        if not config.endpoint or not config.model:
            raise ConfigError("live client requires endpoint and model")
        self.config = config
        self.api_key = os.environ.get(config.api_key_env, "")

    def complete(self, prompt: str, round_index: int = 0) -> str:
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        }
        if self.config.seed is not None:
            body["seed"] = self.config.seed + round_index
        payload = json.dumps(body).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        request = urllib.request.Request(self.config.endpoint, data=payload, headers=headers)
        doc = None
        last_error: Exception | None = None
        for _ in range(self.config.retries + 1):
            try:
                with urllib.request.urlopen(request, timeout=self.config.timeout) as resp:
                    doc = json.loads(resp.read().decode("utf-8"))
                break
            except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
                last_error = exc
        if doc is None:
            raise ClientTransportError(str(last_error)) from last_error
        try:
            return doc["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ClientTransportError(f"unexpected response shape: {exc}") from exc
