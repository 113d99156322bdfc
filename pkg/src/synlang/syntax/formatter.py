"""Canonical text layout for blocks.

The canonical form is the grammar's section order (header, query, factors,
FEEL, TRACE, TRACE_FE, R, controls in source order, COT/CTX), one logical
line per item, two-space item indent and a trailing newline. Confidences are
printed with the fewest digits that read back as the same float.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Iterable

from synlang.syntax.model import Block, ControlKind, TraceItem

_CONTROL_PREFIX = {
    ControlKind.MOD: "MOD:",
    ControlKind.ONLY: "ONLY:",
    ControlKind.PREFER: "PREFER:",
    ControlKind.SOFT_EXCLUDE: "-!",
    ControlKind.HARD_EXCLUDE: "-!!",
    ControlKind.COMMENT: "//",
}

ITEM_INDENT = "  "


def format_confidence(value: float) -> str:
    """Shortest round-tripping decimal, always in ``digits.digits`` form."""
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if "." not in text:
        text += ".0"
    return text


def _quote_context(context: str) -> str:
    needs_quotes = "===" in context or (len(context) >= 2 and context[0] == '"' and context[-1] == '"')
    return f'"{context}"' if needs_quotes else context


def _line(prefix: str, text: str) -> str:
    return f"{prefix} {text}".rstrip()


def format_item(item: TraceItem) -> str:
    parts = [f"- {item.label}:"]
    if item.explanation:
        parts.append(item.explanation)
    if item.confidence is not None:
        parts.append(f"(confidence={format_confidence(item.confidence)})")
    return ITEM_INDENT + " ".join(parts)


def _lines(block: Block) -> Iterable[str]:
    yield f"#{block.task}"
    yield f"@{block.agent}"
    yield f"=== {_quote_context(block.context)} ==="
    yield _line(">", block.query)
    for factor in block.factors:
        yield _line(">" * factor.depth, factor.text)
    if block.feel is not None:
        yield f"FEEL: {block.feel}"
    if block.trace:
        yield "TRACE: " + ", ".join(block.trace)
    if block.trace_fe:
        yield "TRACE_FE:"
        yield from (format_item(item) for item in block.trace_fe)
    if block.response_format is not None:
        yield f"R: {block.response_format}"
    for directive in block.controls:
        yield _line(_CONTROL_PREFIX[directive.kind], directive.text)
    coord = block.coordination
    if coord is not None:
        yield f'COT: {coord.cot_id} -> @{coord.target_agent}: "{coord.task_description}"'
        if coord.ctx_items:
            yield f"CTX: {coord.ctx_id} {{"
            yield from (format_item(item) for item in coord.ctx_items)
            yield "}"
        else:
            yield f"CTX: {coord.ctx_id} {{}}"


def format_canonical(block: Block) -> str:
    return "\n".join(_lines(block)) + "\n"


def format_document(blocks: Iterable[Block]) -> str:
    """Canonical blocks separated by one blank line."""
    return "\n".join(format_canonical(block) for block in blocks)
