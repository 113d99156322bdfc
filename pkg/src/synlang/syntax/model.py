"""Immutable value types produced by the SynLang parser.

Source positions (``span`` fields) are excluded from equality so that a block
re-parsed from its canonical form compares equal to the original.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

IDENTIFIER_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*", re.ASCII)

_EMPTY_SPANS: Mapping[str, "Span"] = MappingProxyType({})


def is_identifier(text: str) -> bool:
    return IDENTIFIER_RE.fullmatch(text) is not None


@dataclass(frozen=True, order=True)
class Span:
    """1-based line/column range; ``end_col`` is exclusive."""

    line: int
    col: int
    end_line: int
    end_col: int

    @classmethod
    def point(cls, line: int = 1, col: int = 1) -> Span:
        return cls(line, col, line, col)

    def cover(self, other: Span) -> Span:
        start = min((self.line, self.col), (other.line, other.col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(start[0], start[1], end[0], end[1])


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Span

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self, filename: str = "<input>") -> str:
        return (
            f"{filename}:{self.span.line}:{self.span.col}: "
            f"{self.severity.value}[{self.code}]: {self.message}"
        )


class ResponseFormat(str, Enum):
    STRUCTURED = "Structured"
    BULLETPOINT = "Bulletpoint"
    TABLE = "Table"
    PLAIN = "Plain"
    JSON = "JSON"
    CODE = "Code"

    @classmethod
    def is_known(cls, value: str) -> bool:
        return value in cls._value2member_map_


class ControlKind(str, Enum):
    MOD = "MOD"
    ONLY = "ONLY"
    PREFER = "PREFER"
    SOFT_EXCLUDE = "SOFT_EXCLUDE"
    HARD_EXCLUDE = "HARD_EXCLUDE"
    COMMENT = "COMMENT"

    @property
    def is_exclusion(self) -> bool:
        return self in (ControlKind.SOFT_EXCLUDE, ControlKind.HARD_EXCLUDE)


@dataclass(frozen=True)
class Factor:
    depth: int
    text: str
    span: Span | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.depth not in (2, 3):
            raise ValueError(f"factor depth must be 2 or 3, got {self.depth}")
        if not self.text.strip():
            raise ValueError("factor text must be nonempty")


@dataclass(frozen=True)
class TraceItem:
    """One labeled explanation; ``confidence`` is None when unquantified."""

    label: str
    explanation: str
    confidence: float | None = None
    span: Span | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not is_identifier(self.label):
            raise ValueError(f"invalid trace item label {self.label!r}")
        if self.confidence is not None and not math.isfinite(self.confidence):
            raise ValueError(f"confidence must be finite, got {self.confidence!r}")


@dataclass(frozen=True)
class ControlDirective:
    kind: ControlKind
    text: str
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Coordination:
    cot_id: str
    target_agent: str
    task_description: str
    ctx_id: str
    ctx_items: tuple[TraceItem, ...] = ()
    cot_span: Span | None = field(default=None, compare=False)
    ctx_span: Span | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for name in ("cot_id", "target_agent", "ctx_id"):
            if not is_identifier(getattr(self, name)):
                raise ValueError(f"invalid {name} {getattr(self, name)!r}")
        object.__setattr__(self, "ctx_items", tuple(self.ctx_items))


@dataclass(frozen=True)
class Block:
    """One SynLang communication block.

    ``response_format`` keeps the raw identifier from the ``R:`` line; whether
    it names a :class:`ResponseFormat` is a validation concern (E-RESP-001).
    ``line_spans`` maps single-occurrence line kinds (``task``, ``agent``,
    ``context``, ``query``, ``feel``, ``trace``, ``trace_fe``,
    ``response_format``) to their source positions.
    """

    task: str
    agent: str
    context: str
    query: str
    factors: tuple[Factor, ...] = ()
    feel: str | None = None
    trace: tuple[str, ...] = ()
    trace_fe: tuple[TraceItem, ...] = ()
    response_format: str | None = None
    controls: tuple[ControlDirective, ...] = ()
    coordination: Coordination | None = None
    source_span: Span | None = field(default=None, compare=False)
    line_spans: Mapping[str, Span] = field(default=_EMPTY_SPANS, compare=False, hash=False)

    def __post_init__(self) -> None:
        for name in ("task", "agent"):
            if not is_identifier(getattr(self, name)):
                raise ValueError(f"invalid {name} identifier {getattr(self, name)!r}")
        if self.feel is not None and not is_identifier(self.feel):
            raise ValueError(f"invalid FEEL identifier {self.feel!r}")
        for name in ("factors", "trace", "trace_fe", "controls"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for ident in self.trace:
            if not is_identifier(ident):
                raise ValueError(f"invalid TRACE identifier {ident!r}")
        if self.factors and self.factors[0].depth == 3:
            raise ValueError("a sub-factor (>>>) cannot precede the first factor (>>)")
        if not isinstance(self.line_spans, MappingProxyType):
            object.__setattr__(self, "line_spans", MappingProxyType(dict(self.line_spans)))

    def span_of(self, key: str) -> Span:
        """Best available position for ``key``, falling back to the block start."""
        if key in self.line_spans:
            return self.line_spans[key]
        if self.source_span is not None:
            return Span.point(self.source_span.line, self.source_span.col)
        return Span.point()

    def confidences(self) -> list[float]:
        """Every quantified confidence in the block, TRACE_FE then CTX."""
        items = list(self.trace_fe)
        if self.coordination is not None:
            items.extend(self.coordination.ctx_items)
        return [item.confidence for item in items if item.confidence is not None]
