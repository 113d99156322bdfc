"""Confidence calculus and cognitive authority.

Confidence values live in [0, 1]. Two operations move them:

* ``propagate`` – a confidence crossing from one agent to another, either
  scaled by ``transmission_factor * trust`` or reduced by a fixed decrement;
* ``compose_chain`` – the product of a chain of step confidences, scaled by a
  coherence factor in (0, 1].

Both can only lower a confidence, which is what :func:`check_humility`
checks. ``authority`` maps a decision context to α in [0, 1] (1 = human
decides, 0 = AI decides) with a clamped affine function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, SupportsFloat

from synlang.errors import ConfigError
from synlang.kv import parse_float, read_kv

HUMILITY_EPSILON = 1e-12


def _check_range(name: str, value: float, lo: float, hi: float, *, lo_open: bool = False) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    below = value <= lo if lo_open else value < lo
    if below or value > hi:
        bracket = "(" if lo_open else "["
        raise ValueError(f"{name} must lie in {bracket}{lo}, {hi}], got {value!r}")
    return value


@dataclass(frozen=True, order=True)
class Confidence:
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _check_range("confidence", self.value, 0.0, 1.0))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class TrustFactor:
    value: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _check_range("trust factor", self.value, 0.5, 1.0))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class CoherenceFactor:
    value: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _check_range("coherence factor", self.value, 0.0, 1.0, lo_open=True))

    def __float__(self) -> float:
        return self.value


class PropagationMode(str, Enum):
    MULTIPLICATIVE = "multiplicative"
    FIXED_DECREMENT = "fixed_decrement"


DEFAULT_TRANSMISSION_FACTOR = 0.98


@dataclass(frozen=True)
class PropagationPolicy:
    mode: PropagationMode = PropagationMode.MULTIPLICATIVE
    transmission_factor: float = DEFAULT_TRANSMISSION_FACTOR
    decrement: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", PropagationMode(self.mode))
        _check_range("transmission factor", self.transmission_factor, 0.9, 1.0)
        _check_range("decrement", self.decrement, 0.0, 0.1)

    @classmethod
    def multiplicative(cls, transmission_factor: float = DEFAULT_TRANSMISSION_FACTOR) -> PropagationPolicy:
        return cls(PropagationMode.MULTIPLICATIVE, transmission_factor=transmission_factor)

    @classmethod
    def fixed_decrement(cls, decrement: float) -> PropagationPolicy:
        return cls(PropagationMode.FIXED_DECREMENT, decrement=decrement)


ConfidenceLike = Confidence | SupportsFloat


def _conf(value: ConfidenceLike) -> float:
    if isinstance(value, Confidence):
        return value.value
    return Confidence(float(value)).value


def propagate(
    confidence: ConfidenceLike,
    policy: PropagationPolicy = PropagationPolicy(),
    trust: TrustFactor | float = 1.0,
) -> Confidence:
    """Confidence an agent may hold in information received from another.

    Multiplicative mode returns ``c * transmission_factor * trust``; fixed
    decrement returns ``max(0, c - decrement)`` and ignores ``trust``.
    """
    c = _conf(confidence)
    trust_value = trust.value if isinstance(trust, TrustFactor) else TrustFactor(float(trust)).value
    if policy.mode is PropagationMode.FIXED_DECREMENT:
        return Confidence(max(0.0, c - policy.decrement))
    return Confidence(c * policy.transmission_factor * trust_value)


def compose_chain(steps: Iterable[ConfidenceLike], coherence: CoherenceFactor | float = 1.0) -> Confidence:
    """Confidence of a conclusion reached through ``steps`` in sequence."""
    values = [_conf(s) for s in steps]
    if not values:
        raise ValueError("compose_chain needs at least one step")
    k = coherence.value if isinstance(coherence, CoherenceFactor) else CoherenceFactor(float(coherence)).value
    return Confidence(math.prod(values) * k)


def check_humility(original: ConfidenceLike, derived: ConfidenceLike) -> bool:
    """True when ``derived`` does not exceed ``original`` (beyond float noise)."""
    return _conf(derived) <= _conf(original) + HUMILITY_EPSILON


# --------------------------------------------------------------------------
# cognitive authority


@dataclass(frozen=True)
class AuthorityContext:
    """Inputs to α, each in [0, 1].

    ``expertise_match``: 1 when the task sits squarely in the AI's strengths.
    ``consequence_severity``: 1 for irreversible, high-stakes outcomes.
    ``value_alignment``: 1 when the decision is dominated by human values.
    ``time_constraints``: 1 under extreme time pressure.
    """

    expertise_match: float
    consequence_severity: float
    value_alignment: float
    time_constraints: float

    def __post_init__(self) -> None:
        for f in fields(self):
            object.__setattr__(self, f.name, _check_range(f.name, getattr(self, f.name), 0.0, 1.0))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.expertise_match, self.consequence_severity, self.value_alignment, self.time_constraints)

    @classmethod
    def from_mapping(cls, entries: Mapping[str, str], source: str = "<string>") -> AuthorityContext:
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in entries]
        extra = sorted(set(entries) - set(names))
        if missing or extra:
            raise ConfigError(f"{source}: profile needs exactly {', '.join(names)} (missing {missing}, unknown {extra})")
        try:
            return cls(**{n: parse_float(entries[n], n, source) for n in names})
        except ValueError as exc:
            raise ConfigError(f"{source}: {exc}") from None

    @classmethod
    def from_file(cls, path: str | Path) -> AuthorityContext:
        return cls.from_mapping(read_kv(path), str(path))


# Calibrated offline by bounded least squares (weights sign-constrained so α
# rises with severity/value and falls with expertise/time pressure) against
# the four REPRESENTATIVE_PROFILES below; bias centres the all-0.5 context at
# α = 0.5.
@dataclass(frozen=True)
class AuthorityWeights:
    expertise_match: float = -0.26
    consequence_severity: float = 0.30
    value_alignment: float = 0.34
    time_constraints: float = -0.16
    bias: float = 0.39

    def __post_init__(self) -> None:
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise ValueError(f"weight {f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)

    @classmethod
    def from_mapping(cls, entries: Mapping[str, str], source: str = "<string>") -> AuthorityWeights:
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(entries) - names)
        if unknown:
            raise ConfigError(f"{source}: unknown weight(s) {', '.join(unknown)}")
        return cls(**{k: parse_float(v, k, source) for k, v in entries.items()})

    @classmethod
    def from_file(cls, path: str | Path | None) -> AuthorityWeights:
        if path is None:
            return cls()
        return cls.from_mapping(read_kv(path), str(path))


DEFAULT_WEIGHTS = AuthorityWeights()

# name -> (context, anchor α the defaults are calibrated to)
REPRESENTATIVE_PROFILES: Mapping[str, tuple[AuthorityContext, float]] = {
    "ethical": (AuthorityContext(0.20, 0.95, 0.95, 0.30), 0.9),
    "medical": (AuthorityContext(0.60, 0.90, 0.50, 0.40), 0.6),
    "financial": (AuthorityContext(0.85, 0.50, 0.20, 0.60), 0.3),
    "data_processing": (AuthorityContext(0.95, 0.10, 0.05, 0.50), 0.1),
}


def authority(context: AuthorityContext, weights: AuthorityWeights = DEFAULT_WEIGHTS) -> float:
    raw = (
        weights.bias
        + weights.expertise_match * context.expertise_match
        + weights.consequence_severity * context.consequence_severity
        + weights.value_alignment * context.value_alignment
        + weights.time_constraints * context.time_constraints
    )
    return min(1.0, max(0.0, raw))
