"""Semantic rule engine over parsed blocks.

Rules (default severities)::

    E-CONF-001  error    confidence outside [0, 1]
    E-CTX-001   error    CTX identifier differs from the COT identifier
    E-RESP-001  error    R: names an unknown response format
    E-COT-001   error    CTX references a COT id no earlier COT line introduced
    W-TRACE-001 warning  TRACE_FE label not listed on the TRACE line
    W-TRACE-002 warning  TRACE_FE item without a confidence
    W-CTRL-001  warning  a term is both in ONLY and in an exclusion
    W-CTRL-002  warning  duplicate directive (same kind and text)
    W-CTX-001   warning  CTX item without a confidence

E-COT-001 is a document rule and only fires from :func:`validate_document`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from synlang.errors import ConfigError
from synlang.kv import parse_kv, read_kv
from synlang.syntax.model import Block, ControlKind, Diagnostic, ResponseFormat, Severity, Span

OFF = "off"


@dataclass(frozen=True)
class Rule:
    code: str
    severity: Severity
    summary: str


RULES: Mapping[str, Rule] = MappingProxyType(
    {
        rule.code: rule
        for rule in (
            Rule("E-CONF-001", Severity.ERROR, "confidence outside [0, 1]"),
            Rule("E-CTX-001", Severity.ERROR, "CTX identifier differs from COT identifier"),
            Rule("E-RESP-001", Severity.ERROR, "unknown response format"),
            Rule("E-COT-001", Severity.ERROR, "CTX references an unknown COT identifier"),
            Rule("W-TRACE-001", Severity.WARNING, "TRACE_FE label missing from TRACE"),
            Rule("W-TRACE-002", Severity.WARNING, "TRACE_FE item without confidence"),
            Rule("W-CTRL-001", Severity.WARNING, "term both required (ONLY) and excluded"),
            Rule("W-CTRL-002", Severity.WARNING, "duplicate control directive"),
            Rule("W-CTX-001", Severity.WARNING, "CTX item without confidence"),
        )
    }
)


@dataclass(frozen=True)
class RuleSet:
    """Which rules run and at what severity.

    ``overrides`` maps a rule code to ``"error"``, ``"warning"`` or ``"off"``.
    """

    enabled: frozenset[str] = frozenset(RULES)
    overrides: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "enabled", frozenset(self.enabled))
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))
        unknown = sorted((set(self.enabled) | set(self.overrides)) - set(RULES))
        if unknown:
            raise ConfigError(f"unknown rule code(s): {', '.join(unknown)}")
        for code, value in self.overrides.items():
            if value not in (Severity.ERROR.value, Severity.WARNING.value, OFF):
                raise ConfigError(f"{code}: severity must be error, warning or off, got {value!r}")

    def severity(self, code: str) -> Severity | None:
        """Effective severity of ``code``, or None when the rule is off."""
        if code not in self.enabled:
            return None
        value = self.overrides.get(code)
        if value == OFF:
            return None
        if value is None:
            return RULES[code].severity
        return Severity(value)

    def without(self, *codes: str) -> RuleSet:
        return RuleSet(self.enabled - set(codes), self.overrides)

    @classmethod
    def from_mapping(cls, entries: Mapping[str, str]) -> RuleSet:
        return cls(overrides={code: value.strip().lower() for code, value in entries.items()})

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> RuleSet:
        return cls.from_mapping(parse_kv(text, source))

    @classmethod
    def from_file(cls, path: str | Path | None) -> RuleSet:
        """Load overrides from a ``CODE = severity`` file; ``None`` gives defaults."""
        if path is None:
            return cls()
        return cls.from_mapping(read_kv(path))


DEFAULT_RULES = RuleSet()


def _terms(text: str) -> set[str]:
    return {t.strip().casefold() for t in text.split(",") if t.strip()}


class _Collector:
    def __init__(self, rules: RuleSet) -> None:
        self.rules = rules
        self.out: list[Diagnostic] = []

    def add(self, code: str, message: str, span: Span | None, fallback: Span) -> None:
        severity = self.rules.severity(code)
        if severity is not None:
            self.out.append(Diagnostic(severity, code, message, span or fallback))


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (d.span.line, d.span.col, d.code, d.message))


def validate_block(block: Block, rules: RuleSet = DEFAULT_RULES) -> list[Diagnostic]:
    """Run the block-level rules; result is ordered by source position."""
    out = _Collector(rules)
    where = block.span_of("task")

    for item in block.trace_fe:
        if item.confidence is None:
            out.add("W-TRACE-002", f"TRACE_FE item {item.label!r} has no confidence", item.span, where)
        elif not 0.0 <= item.confidence <= 1.0:
            out.add("E-CONF-001", f"confidence {item.confidence!r} of {item.label!r} is outside [0, 1]", item.span, where)
        if item.label not in block.trace:
            out.add("W-TRACE-001", f"TRACE_FE label {item.label!r} is not listed on the TRACE line", item.span, where)

    coord = block.coordination
    if coord is not None:
        if coord.ctx_id != coord.cot_id:
            out.add(
                "E-CTX-001",
                f"CTX {coord.ctx_id} must carry the COT identifier {coord.cot_id}",
                coord.ctx_span,
                where,
            )
        for item in coord.ctx_items:
            if item.confidence is None:
                out.add("W-CTX-001", f"CTX item {item.label!r} has no confidence", item.span, where)
            elif not 0.0 <= item.confidence <= 1.0:
                out.add("E-CONF-001", f"confidence {item.confidence!r} of {item.label!r} is outside [0, 1]", item.span, where)

    if block.response_format is not None and not ResponseFormat.is_known(block.response_format):
        known = ", ".join(f.value for f in ResponseFormat)
        out.add(
            "E-RESP-001",
            f"unknown response format {block.response_format!r} (expected one of {known})",
            block.span_of("response_format"),
            where,
        )

    required: set[str] = set()
    for directive in block.controls:
        if directive.kind is ControlKind.ONLY:
            required |= _terms(directive.text)
    seen: set[tuple[ControlKind, str]] = set()
    for directive in block.controls:
        if directive.kind.is_exclusion:
            clash = sorted(_terms(directive.text) & required)
            if clash:
                out.add(
                    "W-CTRL-001",
                    f"{', '.join(clash)} is both required by ONLY and excluded",
                    directive.span,
                    where,
                )
        key = (directive.kind, directive.text)
        if key in seen:
            out.add("W-CTRL-002", f"duplicate {directive.kind.value} directive {directive.text!r}", directive.span, where)
        seen.add(key)

    return sort_diagnostics(out.out)


def validate_document(blocks: Sequence[Block], rules: RuleSet = DEFAULT_RULES) -> list[Diagnostic]:
    """Block rules for every block plus the cross-block E-COT-001 check."""
    diagnostics: list[Diagnostic] = []
    introduced: set[str] = set()
    for block in blocks:
        diagnostics.extend(validate_block(block, rules))
        coord = block.coordination
        if coord is None:
            continue
        introduced.add(coord.cot_id)
        if coord.ctx_id not in introduced:
            out = _Collector(rules)
            out.add(
                "E-COT-001",
                f"CTX {coord.ctx_id} references no COT introduced earlier in the document",
                coord.ctx_span,
                block.span_of("task"),
            )
            diagnostics.extend(out.out)
    return sort_diagnostics(diagnostics)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
