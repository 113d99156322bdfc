"""Hypothesis strategies producing grammar-valid Block values."""

from __future__ import annotations

from hypothesis import strategies as st

from synlang.syntax import Block, ControlDirective, ControlKind, Coordination, Factor, TraceItem

identifiers = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,12}", fullmatch=True)

# Single-line free text, trimmed as the parser trims it.
texts = st.text(
    alphabet=st.characters(
        whitelist_categories=("L", "N", "P", "S", "Zs"),
        blacklist_characters="\r\n\x0b\x0c\x1c\x1d\x1e\x1f\x85  ",
    ),
    max_size=40,
).map(str.strip)

confidences = st.floats(min_value=0.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def items(confidence: st.SearchStrategy[float | None]) -> st.SearchStrategy[TraceItem]:
    return st.builds(TraceItem, identifiers, texts, confidence)


@st.composite
def factor_lists(draw: st.DrawFn) -> tuple[Factor, ...]:
    depths = draw(st.lists(st.sampled_from([2, 3]), max_size=5))
    if depths:
        depths[0] = 2
    return tuple(Factor(d, draw(texts.filter(bool))) for d in depths)


def blocks(confidence: st.SearchStrategy[float | None] = confidences) -> st.SearchStrategy[Block]:
    coordination = st.builds(
        Coordination,
        cot_id=identifiers,
        target_agent=identifiers,
        task_description=texts,
        ctx_id=identifiers,
        ctx_items=st.lists(items(confidence), max_size=3).map(tuple),
    )
    return st.builds(
        Block,
        task=identifiers,
        agent=identifiers,
        context=texts,
        query=texts,
        factors=factor_lists(),
        feel=st.none() | identifiers,
        trace=st.lists(identifiers, max_size=4).map(tuple),
        trace_fe=st.lists(items(confidence), max_size=4).map(tuple),
        response_format=st.none() | identifiers,
        controls=st.lists(st.builds(ControlDirective, st.sampled_from(list(ControlKind)), texts), max_size=4).map(tuple),
        coordination=st.none() | coordination,
    )
