"""Reasoning-trace composition and a deterministic COT/CTX handoff simulator.

A scenario is an ordered list of ``(sender, block)`` events processed on a
single logical timeline. For each event the sender's own TRACE_FE items are
appended to its trace (hop 0), then, if the block carries a COT/CTX pair, the
CTX items are degraded with the receiver's policy and appended to the
receiver's trace.

Forwarding: when the sender already holds a step with the same label, the
forwarded step continues that step (same origin agent, ``hop_index + 1``) and
starts from ``min(stated, held)`` confidence, so relaying can never raise a
confidence above what the sender actually received.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

from synlang.calculus import PropagationMode, PropagationPolicy, TrustFactor, propagate
from synlang.errors import ConfigError, HandoffRefused, RegistrationError, RoutingError, SynLangError
from synlang.kv import parse_float, parse_kv
from synlang.syntax.export import dumps
from synlang.syntax.model import Block, TraceItem, is_identifier
from synlang.validate import DEFAULT_RULES, RuleSet, has_errors, validate_block

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    """One reasoning step; ``confidence`` None marks an unquantified step."""

    step: str
    evidence: str
    confidence: float | None
    origin_agent: str
    hop_index: int = 0

    def __post_init__(self) -> None:
        if self.hop_index < 0:
            raise ValueError("hop_index must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "step": self.step,
            "evidence": self.evidence,
            "confidence": self.confidence,
            "origin_agent": self.origin_agent,
            "hop_index": self.hop_index,
        }


@dataclass(frozen=True)
class ReasoningTrace:
    steps: tuple[TraceStep, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __add__(self, other: ReasoningTrace) -> ReasoningTrace:
        return compose_traces(self, other)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TraceStep]:
        return iter(self.steps)

    def latest(self, step: str) -> TraceStep | None:
        for s in reversed(self.steps):
            if s.step == step:
                return s
        return None


def compose_traces(first: ReasoningTrace, second: ReasoningTrace) -> ReasoningTrace:
    """Concatenate two traces; steps keep their origin and confidence."""
    return ReasoningTrace(first.steps + second.steps)


@dataclass(frozen=True)
class AgentProfile:
    name: str
    trust: TrustFactor = TrustFactor()
    policy: PropagationPolicy = PropagationPolicy()

    def __post_init__(self) -> None:
        if not is_identifier(self.name):
            raise ValueError(f"invalid agent name {self.name!r}")
        if not isinstance(self.trust, TrustFactor):
            object.__setattr__(self, "trust", TrustFactor(float(self.trust)))


class AgentRegistry:
    def __init__(self, profiles: Iterable[AgentProfile] = ()) -> None:
        self._profiles: dict[str, AgentProfile] = {}
        for profile in profiles:
            self.register(profile)

    def register(self, profile: AgentProfile) -> AgentRegistry:
        if profile.name in self._profiles:
            raise RegistrationError(f"agent {profile.name!r} is already registered")
        self._profiles[profile.name] = profile
        return self

    def __contains__(self, name: object) -> bool:
        return name in self._profiles

    def __len__(self) -> int:
        return len(self._profiles)

    def __getitem__(self, name: str) -> AgentProfile:
        return self._profiles[name]

    def names(self) -> list[str]:
        return sorted(self._profiles)


def register_agent(registry: AgentRegistry, profile: AgentProfile) -> AgentRegistry:
    return registry.register(profile)


@dataclass(frozen=True)
class HandoffRecord:
    cot_id: str
    ctx_id: str
    sender: str
    receiver: str
    task_description: str
    source_items: tuple[TraceItem, ...]
    transferred: tuple[TraceStep, ...]
    timestamp: int

    @property
    def transferred_items(self) -> tuple[TraceItem, ...]:
        return tuple(TraceItem(s.step, s.evidence, s.confidence) for s in self.transferred)

    def to_dict(self) -> dict[str, Any]:
        return {
            "timestamp": self.timestamp,
            "cot_id": self.cot_id,
            "ctx_id": self.ctx_id,
            "sender": self.sender,
            "receiver": self.receiver,
            "task_description": self.task_description,
            "items": [
                {
                    "label": src.label,
                    "explanation": src.explanation,
                    "stated_confidence": src.confidence,
                    **{k: v for k, v in step.to_dict().items() if k not in ("step", "evidence")},
                }
                for src, step in zip(self.source_items, self.transferred)
            ],
        }


@dataclass(frozen=True)
class AuditLog:
    records: tuple[HandoffRecord, ...] = ()
    traces: Mapping[str, ReasoningTrace] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "records": [r.to_dict() for r in self.records],
            "traces": {name: [s.to_dict() for s in self.traces[name]] for name in sorted(self.traces)},
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


class SimulationError(SynLangError):
    """A scenario aborted; ``partial_log`` holds everything up to the failure."""

    def __init__(self, cause: SynLangError, partial_log: AuditLog, event_index: int) -> None:
        self.cause = cause
        self.partial_log = partial_log
        self.event_index = event_index
        super().__init__(f"event {event_index}: {cause}")


class Simulator:
    """Owns the per-agent traces and logical clock for one run."""

    def __init__(self, registry: AgentRegistry, rules: RuleSet = DEFAULT_RULES) -> None:
        self.registry = registry
        self.rules = rules
        self.traces: dict[str, ReasoningTrace] = {}
        self.records: list[HandoffRecord] = []
        self.clock = 0

    def trace_of(self, agent: str) -> ReasoningTrace:
        return self.traces.get(agent, ReasoningTrace())

    def _append(self, agent: str, steps: Sequence[TraceStep]) -> None:
        if steps:
            self.traces[agent] = compose_traces(self.trace_of(agent), ReasoningTrace(steps))

    def record_own_steps(self, sender: str, block: Block) -> None:
        self._append(
            sender,
            [TraceStep(i.label, i.explanation, i.confidence, sender, 0) for i in block.trace_fe],
        )

    def handoff(self, block: Block, sender: str) -> HandoffRecord:
        coord = block.coordination
        if coord is None:
            raise ValueError("handoff needs a block with a COT/CTX coordination pair")
        if coord.target_agent not in self.registry:
            raise RoutingError("E-ROUTE-001", f"receiver @{coord.target_agent} is not registered")
        if sender not in self.registry:
            raise RoutingError("E-ROUTE-002", f"sender {sender} is not registered")
        problems = [d for d in validate_block(block, self.rules) if d.is_error]
        if problems:
            raise HandoffRefused(problems)

        receiver = self.registry[coord.target_agent]
        held_by_sender = self.trace_of(sender)
        steps = []
        for item in coord.ctx_items:
            held = held_by_sender.latest(item.label)
            origin, hop, base = sender, 1, item.confidence
            if held is not None:
                origin, hop = held.origin_agent, held.hop_index + 1
                if held.confidence is not None:
                    base = held.confidence if base is None else min(base, held.confidence)
            degraded = None if base is None else propagate(base, receiver.policy, receiver.trust).value
            steps.append(TraceStep(item.label, item.explanation, degraded, origin, hop))

        self._append(receiver.name, steps)
        self.clock += 1
        record = HandoffRecord(
            cot_id=coord.cot_id,
            ctx_id=coord.ctx_id,
            sender=sender,
            receiver=receiver.name,
            task_description=coord.task_description,
            source_items=coord.ctx_items,
            transferred=tuple(steps),
            timestamp=self.clock,
        )
        self.records.append(record)
        log.debug("handoff %s %s -> %s (%d items)", coord.cot_id, sender, receiver.name, len(steps))
        return record

    def deliver(self, sender: str, block: Block) -> HandoffRecord | None:
        if sender not in self.registry:
            raise RoutingError("E-ROUTE-002", f"sender {sender} is not registered")
        self.record_own_steps(sender, block)
        if block.coordination is None:
            return None
        return self.handoff(block, sender)

    def audit_log(self) -> AuditLog:
        return AuditLog(tuple(self.records), dict(self.traces))

    def run(self, scenario: Iterable[tuple[str, Block]]) -> AuditLog:
        for index, (sender, block) in enumerate(scenario, start=1):
            try:
                self.deliver(sender, block)
            except (RoutingError, HandoffRefused) as exc:
                raise SimulationError(exc, self.audit_log(), index) from exc
        return self.audit_log()


def handoff(registry: AgentRegistry, block: Block, sender: str) -> HandoffRecord:
    """One-off handoff against a fresh simulator (empty traces)."""
    return Simulator(registry).handoff(block, sender)


def simulate(scenario: Iterable[tuple[str, Block]], registry: AgentRegistry) -> AuditLog:
    return Simulator(registry).run(scenario)


# --------------------------------------------------------------------------
# manifest files


@dataclass(frozen=True)
class Manifest:
    """Senders per block (1-based) and the agent registry for a scenario.

    File format (flat ``key = value``)::

        block.1 = AI_DETECTOR
        agent.AI_DETECTOR.trust = 1.0
        agent.AI_FORENSICS.policy = fixed_decrement
        agent.AI_FORENSICS.decrement = 0.02

    Agent keys: ``trust``, ``policy`` (``multiplicative`` or
    ``fixed_decrement``), ``transmission_factor``, ``decrement``.
    """

    senders: Mapping[int, str]
    registry: AgentRegistry

    @classmethod
    def from_text(cls, text: str, source: str = "<manifest>") -> Manifest:
        entries = parse_kv(text, source)
        senders: dict[int, str] = {}
        agents: dict[str, dict[str, str]] = {}
        for key, value in entries.items():
            parts = key.split(".")
            if len(parts) == 2 and parts[0] == "block" and parts[1].isdigit() and int(parts[1]) >= 1:
                senders[int(parts[1])] = value
            elif len(parts) == 3 and parts[0] == "agent":
                agents.setdefault(parts[1], {})[parts[2]] = value
            else:
                raise ConfigError(f"{source}: unrecognized manifest key {key!r}")
        registry = AgentRegistry()
        for name in sorted(agents):
            registry.register(_profile(name, agents[name], source))
        return cls(senders, registry)

    @classmethod
    def from_file(cls, path: str | Path) -> Manifest:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), str(path))

    def scenario(self, blocks: Sequence[Block]) -> list[tuple[str, Block]]:
        missing = [i for i in range(1, len(blocks) + 1) if i not in self.senders]
        if missing:
            raise ConfigError(f"manifest names no sender for block(s) {missing}")
        extra = sorted(i for i in self.senders if i > len(blocks))
        if extra:
            raise ConfigError(f"manifest names senders for missing block(s) {extra}")
        return [(self.senders[i], block) for i, block in enumerate(blocks, start=1)]


def _profile(name: str, params: Mapping[str, str], source: str) -> AgentProfile:
    unknown = sorted(set(params) - {"trust", "policy", "transmission_factor", "decrement"})
    if unknown:
        raise ConfigError(f"{source}: agent {name}: unknown key(s) {', '.join(unknown)}")
    try:
        mode = PropagationMode(params.get("policy", PropagationMode.MULTIPLICATIVE.value))
        if mode is PropagationMode.FIXED_DECREMENT:
            policy = PropagationPolicy.fixed_decrement(parse_float(params.get("decrement", "0"), "decrement", source))
        else:
            tf = params.get("transmission_factor")
            policy = PropagationPolicy.multiplicative(
                *(() if tf is None else (parse_float(tf, "transmission_factor", source),))
            )
        trust = TrustFactor(parse_float(params.get("trust", "1.0"), "trust", source))
        return AgentProfile(name, trust, policy)
    except ValueError as exc:
        raise ConfigError(f"{source}: agent {name}: {exc}") from None
