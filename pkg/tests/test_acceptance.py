"""Acceptance suite: one test per criterion, run at the stated tolerances.

``pytest tests/test_acceptance.py`` prints a PASS/FAIL line per criterion in
the terminal summary (see ``conftest.py``).
"""

from __future__ import annotations

import json
import random
import sys
import time

import pytest

from conftest import COMPLETE_EXAMPLE, CORPUS, VIOLATIONS
from grammar_gen import blocks as generated_blocks
from synlang.calculus import (
    REPRESENTATIVE_PROFILES,
    AuthorityContext,
    PropagationPolicy,
    authority,
    compose_chain,
    propagate,
)
from synlang.coordination import AgentProfile, AgentRegistry, simulate
from synlang.syntax import Factor, TraceItem, format_canonical, parse_block, parse_document
from synlang.validate import validate_document

CRITERIA = {
    "test_fixture_corpus": "verbatim fixture corpus parses leniently with exact field values (< 1 s)",
    "test_round_trip_generated_blocks": "1000 generated blocks round-trip and format idempotently (< 10 s)",
    "test_degradation_example": "propagate(0.95, fixed_decrement 0.02) == 0.93 (tol 1e-9)",
    "test_epistemic_humility_suite": "10k chains and 10k propagations never raise confidence (< 5 s)",
    "test_authority_anchors": "default weights within 0.1 of the four anchors and monotone on 1000 contexts",
    "test_coordination_semantics": "complete-example handoff semantics and byte-identical audit logs",
    "test_lint_detection": "20 seeded violations at 100% recall, no false positives on clean fixtures",
}

# Codes the seeded corpus targets; any of these (or any error) on a clean
# fixture is a false positive.
VIOLATION_CODES = {"E-CONF-001", "E-CTX-001", "E-COT-001", "E-RESP-001", "W-CTRL-001", "W-CTRL-002"}

# Informational warnings the clean fixtures legitimately carry: the verbatim
# examples omit some TRACE_FE labels from TRACE and one CTX confidence.
EXPECTED_CLEAN_WARNINGS = {
    "complete_example.syn": ["W-CTX-001"],
    "snippet_governance_trace.syn": ["W-TRACE-001"],
    "snippet_medical_diagnosis.syn": ["W-TRACE-001"],
    "snippet_research_trace.syn": ["W-TRACE-001", "W-TRACE-001"],
}


def test_fixture_corpus() -> None:
    start = time.perf_counter()
    files = sorted(CORPUS.glob("*.syn"))
    assert len(files) == 10
    for path in files:
        parsed = parse_document(path.read_bytes(), "lenient")
        assert all(p.ok for p in parsed), path.name
        semantic = validate_document([p.block for p in parsed])
        assert not any(d.is_error for d in semantic), path.name

    block = parse_document(COMPLETE_EXAMPLE.read_bytes(), "lenient")[0].block
    assert block.task == "DISINFO_ANALYSIS"
    assert block.agent == "AI_DETECTOR"
    assert block.context == "Political speech deepfake"
    assert block.query == "Is this video manipulated?"
    assert block.factors == (Factor(2, "Viral on 5 channels"), Factor(2, "No source verification"))
    assert block.feel == "urgent"
    assert block.trace == ("lip_sync", "background_artifacts")
    assert block.trace_fe == (
        TraceItem("lip_sync", "120ms delay", 0.94),
        TraceItem("background_artifacts", "pixel repetition in background", 0.87),
    )
    assert block.response_format == "Structured"
    assert block.controls == ()
    coord = block.coordination
    assert coord is not None
    assert (coord.cot_id, coord.target_agent, coord.ctx_id) == ("COT_a1b2c", "AI_FORENSICS", "COT_a1b2c")
    assert coord.task_description == "Analyze frame-level compression"
    assert coord.ctx_items == (
        TraceItem("decision", "Suspected frame insertion", 0.91),
        TraceItem("context", "election_day_2024", None),
    )
    assert time.perf_counter() - start < 1.0


def test_round_trip_generated_blocks() -> None:
    start = time.perf_counter()
    sources = generated_blocks(seed=20240601, count=1000)
    assert len(sources) == 1000
    for source in sources:
        first = parse_block(source, "strict")
        text = format_canonical(first)
        second = parse_block(text, "strict")
        assert second == first, source
        assert format_canonical(second) == text, source
    assert time.perf_counter() - start < 10.0


def test_degradation_example() -> None:
    result = propagate(0.95, PropagationPolicy.fixed_decrement(0.02), trust=1.0)
    assert result.value == pytest.approx(0.93, abs=1e-9)


def test_epistemic_humility_suite() -> None:
    rng = random.Random(8_2_2024)
    start = time.perf_counter()
    for _ in range(10_000):
        chain = [rng.random() for _ in range(rng.randint(1, 10))]
        coherence = 1.0 - rng.random()  # uniform on (0, 1]
        assert compose_chain(chain, coherence).value <= min(chain) + 1e-12
    for _ in range(10_000):
        c = rng.random()
        if rng.random() < 0.5:
            policy = PropagationPolicy.multiplicative(rng.uniform(0.9, 1.0))
        else:
            policy = PropagationPolicy.fixed_decrement(rng.uniform(0.0, 0.1))
        assert propagate(c, policy, rng.uniform(0.5, 1.0)).value <= c
    assert time.perf_counter() - start < 5.0


def test_authority_anchors() -> None:
    for name, (context, anchor) in REPRESENTATIVE_PROFILES.items():
        assert abs(authority(context) - anchor) <= 0.1, name

    # α rises with severity and value alignment, falls with expertise and time pressure
    directions = {"expertise_match": -1, "consequence_severity": 1, "value_alignment": 1, "time_constraints": -1}
    rng = random.Random(2)
    for _ in range(1000):
        base = AuthorityContext(*(rng.random() for _ in range(4)))
        a0 = authority(base)
        for field, sign in directions.items():
            value = getattr(base, field)
            bumped = AuthorityContext(**{**base.__dict__, field: rng.uniform(value, 1.0)})
            assert sign * (authority(bumped) - a0) >= -1e-12, (base, field)


def _run_complete_example() -> tuple[str, object]:
    block = parse_document(COMPLETE_EXAMPLE.read_bytes(), "lenient")[0].block
    registry = AgentRegistry(
        [
            AgentProfile("AI_DETECTOR"),
            AgentProfile("AI_FORENSICS", policy=PropagationPolicy.fixed_decrement(0.02)),
        ]
    )
    log = simulate([("AI_DETECTOR", block)], registry)
    return log.to_json(), log


def test_coordination_semantics() -> None:
    first_json, log = _run_complete_example()
    second_json, _ = _run_complete_example()
    assert first_json.encode() == second_json.encode()
    json.loads(first_json)

    assert len(log.records) == 1
    record = log.records[0]
    assert record.ctx_id == record.cot_id == "COT_a1b2c"
    receiver = log.traces["AI_FORENSICS"]
    assert len(receiver) == 2
    assert receiver.steps[-len(record.transferred):] == record.transferred
    assert all(step.origin_agent == "AI_DETECTOR" for step in record.transferred)
    for original, step in zip(record.source_items, record.transferred):
        assert step.step == original.label
        if original.confidence is not None:
            assert step.confidence <= original.confidence
        else:
            assert step.confidence is None
    assert record.transferred[0].confidence == pytest.approx(0.89, abs=1e-9)


def test_lint_detection() -> None:
    expected = json.loads((VIOLATIONS / "expected.json").read_text(encoding="utf-8"))
    assert len(expected) == 20
    for name, codes in expected.items():
        parsed = parse_document((VIOLATIONS / name).read_bytes(), "lenient")
        assert all(p.ok for p in parsed), name
        found = sorted(d.code for d in validate_document([p.block for p in parsed]))
        assert found == codes, name

    for path in sorted(CORPUS.glob("*.syn")):
        parsed = parse_document(path.read_bytes(), "lenient")
        diagnostics = validate_document([p.block for p in parsed])
        assert not any(d.is_error or d.code in VIOLATION_CODES for d in diagnostics), path.name
        assert sorted(d.code for d in diagnostics) == EXPECTED_CLEAN_WARNINGS.get(path.name, []), path.name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
