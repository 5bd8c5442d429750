"""Least-limiting adviser synthesis and guided execution for safety games."""

from .arena import (
    ADVERSARY,
    PASS_INPUT,
    PROTAGONIST,
    Adviser,
    Arena,
    Finding,
    InvalidAdviserError,
    InvalidArenaError,
    State,
    alternation_transform,
    enabled_inputs,
    is_play_prefix,
    nonblocking_restricted,
    normalize_adviser,
    prune_blocking,
    restrict,
    validate,
)
from .fixtures import FIXTURE_NAMES, fixture
from .formats import (
    DocumentError,
    DocumentSemanticError,
    DocumentSyntaxError,
    export_dot,
    parse_adviser,
    parse_arena,
    parse_script,
    parse_strategy,
    serialize_adviser,
    serialize_arena,
    serialize_bundle,
    serialize_script,
    serialize_strategy,
)
from .guided import (
    HALTED_HARD,
    HALTED_NO,
    HALTED_UNSAFE,
    OUTCOME_HARD,
    OUTCOME_NORMAL,
    OUTCOME_SOFT,
    OUTCOME_UNSAFE,
    AdvicePacket,
    ScriptExhaustedError,
    Session,
    SessionError,
    StepEvent,
    advice,
    adversary_step,
    auto_adversary,
    compliant_random,
    protagonist_step,
    scripted,
    start,
    worst_case,
)
from .manufacturing import (
    RuleTemplate,
    TemplateError,
    default_template,
    generate_manufacturing,
    parse_template,
    serialize_template,
)
from .meanpayoff import (
    InvalidStrategyError,
    MemorylessStrategy,
    NotGoodAdviserError,
    SolverError,
    ValueReport,
    WeightedArena,
    build_meanpayoff,
    limitation,
    solve,
    solve_adviser,
    worst_case_average,
)
from .safety import (
    LosingLadder,
    NoGoodAdviserError,
    adversary_attractor,
    compute_losing,
    exists_good_adviser,
    nominal_adviser,
)
from .search import (
    CandidateRecord,
    SolveBundle,
    enumerate_candidates,
    free_choices,
    is_good,
    leq,
    successors_in_order,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ADVERSARY",
    "AdvicePacket",
    "Adviser",
    "Arena",
    "CandidateRecord",
    "DocumentError",
    "DocumentSemanticError",
    "DocumentSyntaxError",
    "FIXTURE_NAMES",
    "Finding",
    "HALTED_HARD",
    "HALTED_NO",
    "HALTED_UNSAFE",
    "InvalidAdviserError",
    "InvalidArenaError",
    "InvalidStrategyError",
    "LosingLadder",
    "MemorylessStrategy",
    "NoGoodAdviserError",
    "NotGoodAdviserError",
    "OUTCOME_HARD",
    "OUTCOME_NORMAL",
    "OUTCOME_SOFT",
    "OUTCOME_UNSAFE",
    "PASS_INPUT",
    "PROTAGONIST",
    "RuleTemplate",
    "ScriptExhaustedError",
    "Session",
    "SessionError",
    "SolveBundle",
    "SolverError",
    "State",
    "StepEvent",
    "TemplateError",
    "ValueReport",
    "WeightedArena",
    "adversary_attractor",
    "adversary_step",
    "advice",
    "alternation_transform",
    "auto_adversary",
    "build_meanpayoff",
    "compliant_random",
    "compute_losing",
    "default_template",
    "enabled_inputs",
    "enumerate_candidates",
    "exists_good_adviser",
    "export_dot",
    "fixture",
    "free_choices",
    "generate_manufacturing",
    "is_good",
    "is_play_prefix",
    "leq",
    "limitation",
    "nominal_adviser",
    "nonblocking_restricted",
    "normalize_adviser",
    "parse_adviser",
    "parse_arena",
    "parse_script",
    "parse_strategy",
    "parse_template",
    "protagonist_step",
    "prune_blocking",
    "restrict",
    "scripted",
    "serialize_adviser",
    "serialize_arena",
    "serialize_bundle",
    "serialize_script",
    "serialize_strategy",
    "serialize_template",
    "solve",
    "solve_adviser",
    "start",
    "successors_in_order",
    "synthesize",
    "validate",
    "worst_case",
    "worst_case_average",
]
