"""SynLang: a structured protocol for human-AI and agent-to-agent messages.

Subpackages and modules:

* :mod:`synlang.syntax` tokenizes, parses, formats and exports blocks;
* :mod:`synlang.validate` runs semantic lint rules;
* :mod:`synlang.calculus` implements confidence propagation and authority;
* :mod:`synlang.coordination` simulates COT/CTX handoffs between agents.
"""

from synlang.calculus import (
    AuthorityContext,
    AuthorityWeights,
    CoherenceFactor,
    Confidence,
    PropagationMode,
    PropagationPolicy,
    TrustFactor,
    authority,
    check_humility,
    compose_chain,
    propagate,
)
from synlang.coordination import (
    AgentProfile,
    AgentRegistry,
    AuditLog,
    HandoffRecord,
    ReasoningTrace,
    Simulator,
    TraceStep,
    compose_traces,
    handoff,
    register_agent,
    simulate,
)
from synlang.syntax import (
    Block,
    Diagnostic,
    Mode,
    TraceItem,
    export_json,
    format_canonical,
    import_json,
    parse_block,
    parse_document,
    tokenize,
)
from synlang.validate import RuleSet, validate_block, validate_document

__version__ = "0.1.0"

__all__ = [
    "AgentProfile",
    "AgentRegistry",
    "AuditLog",
    "AuthorityContext",
    "AuthorityWeights",
    "Block",
    "CoherenceFactor",
    "Confidence",
    "Diagnostic",
    "HandoffRecord",
    "Mode",
    "PropagationMode",
    "PropagationPolicy",
    "ReasoningTrace",
    "RuleSet",
    "Simulator",
    "TraceItem",
    "TraceStep",
    "TrustFactor",
    "authority",
    "check_humility",
    "compose_chain",
    "compose_traces",
    "export_json",
    "format_canonical",
    "handoff",
    "import_json",
    "parse_block",
    "parse_document",
    "propagate",
    "register_agent",
    "simulate",
    "tokenize",
    "validate_block",
    "validate_document",
]
