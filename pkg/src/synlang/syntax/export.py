"""JSON export/import of blocks.

Key order is fixed by construction (``sort_keys`` is deliberately not used so
the tree reads in block order); confidences are JSON numbers or ``null``.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from synlang.syntax.model import Block, ControlDirective, ControlKind, Coordination, Factor, TraceItem


def item_to_dict(item: TraceItem) -> dict[str, Any]:
    return {"label": item.label, "explanation": item.explanation, "confidence": item.confidence}


def block_to_dict(block: Block) -> dict[str, Any]:
    coord = block.coordination
    return {
        "task": block.task,
        "agent": block.agent,
        "context": block.context,
        "query": block.query,
        "factors": [{"depth": f.depth, "text": f.text} for f in block.factors],
        "feel": block.feel,
        "trace": list(block.trace),
        "trace_fe": [item_to_dict(i) for i in block.trace_fe],
        "response_format": block.response_format,
        "controls": [{"kind": c.kind.value, "text": c.text} for c in block.controls],
        "coordination": None
        if coord is None
        else {
            "cot_id": coord.cot_id,
            "target_agent": coord.target_agent,
            "task_description": coord.task_description,
            "ctx_id": coord.ctx_id,
            "ctx_items": [item_to_dict(i) for i in coord.ctx_items],
        },
    }


def _item(data: dict[str, Any]) -> TraceItem:
    confidence = data.get("confidence")
    return TraceItem(data["label"], data["explanation"], None if confidence is None else float(confidence))


def block_from_dict(data: dict[str, Any]) -> Block:
    coord = data.get("coordination")
    return Block(
        task=data["task"],
        agent=data["agent"],
        context=data["context"],
        query=data["query"],
        factors=tuple(Factor(f["depth"], f["text"]) for f in data.get("factors", [])),
        feel=data.get("feel"),
        trace=tuple(data.get("trace", [])),
        trace_fe=tuple(_item(i) for i in data.get("trace_fe", [])),
        response_format=data.get("response_format"),
        controls=tuple(ControlDirective(ControlKind(c["kind"]), c["text"]) for c in data.get("controls", [])),
        coordination=None
        if coord is None
        else Coordination(
            cot_id=coord["cot_id"],
            target_agent=coord["target_agent"],
            task_description=coord["task_description"],
            ctx_id=coord["ctx_id"],
            ctx_items=tuple(_item(i) for i in coord.get("ctx_items", [])),
        ),
    )


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def export_json(block: Block) -> str:
    return dumps(block_to_dict(block))


def export_document_json(blocks: Iterable[Block]) -> str:
    return dumps([block_to_dict(b) for b in blocks])


def import_json(text: str) -> Block | list[Block]:
    """Inverse of :func:`export_json` / :func:`export_document_json`."""
    data = json.loads(text)
    if isinstance(data, list):
        return [block_from_dict(d) for d in data]
    return block_from_dict(data)
