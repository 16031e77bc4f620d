"""Shared error types and the diagnostics record used across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


class UdgScanError(Exception):
    """Base class for all tool errors."""


class ConfigError(UdgScanError):
    pass


class SubsetViolation(UdgScanError):
    """A source file uses a construct outside the supported Java subset."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
        self.message = message


class HierarchyCycle(UdgScanError):
    """The subtype relation contains a cycle; the repository is rejected."""


class UnresolvedLabel(UdgScanError):
    pass


class OracleParseError(UdgScanError):
    pass


class UnknownClass(UdgScanError):
    pass


class UnknownMethod(UdgScanError):
    pass


class SchemaError(UdgScanError):
    """A configuration or knowledge-base document violates its schema."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


class MissingGuideline(UdgScanError):
    pass


class ParseFailure(UdgScanError):
    pass


class AllRoundsFailed(UdgScanError):
    pass


class IdMismatch(UdgScanError):
    pass


class EmptyInput(UdgScanError):
    pass


class CollisionError(UdgScanError):
    pass


class DuplicatePair(UdgScanError):
    pass


class BudgetExceeded(UdgScanError):
    pass


class ClientTransportError(UdgScanError):
    """Transient transport failure from a live inference endpoint."""


@dataclass
class Diagnostic:
    """One non-fatal finding of the pipeline (subset violations, oracle faults, ...)."""

    severity: str  # "info" | "warning" | "error"
    module: str
    message: str
    path: str = ""
    line: int = 0

    def as_dict(self) -> dict:
        return {
            "severity": self.severity,
            "module": self.module,
            "message": self.message,
            "path": self.path,
            "line": self.line,
        }

    def render(self) -> str:
        loc = f"{self.path}:{self.line}: " if self.path else ""
        return f"[{self.severity}] {self.module}: {loc}{self.message}"


@dataclass
class DiagnosticSink:
    """Ordered collector shared by pipeline stages."""

    items: list[Diagnostic] = field(default_factory=list)

    def add(self, severity: str, module: str, message: str, path: str = "", line: int = 0) -> None:
        self.items.append(Diagnostic(severity, module, message, path, line))

    def extend(self, other: "DiagnosticSink") -> None:
        self.items.extend(other.items)

    def has_errors(self) -> bool:
        return any(d.severity == "error" for d in self.items)

    def as_dicts(self) -> list[dict]:
        return [d.as_dict() for d in self.items]
