"""knowctx: epistemic context networks and the probability rules they admit.

A context is a chain of complete alternative sets, each tagged with how
knowable its outcome is, carrying complex weights on alternatives and
transitions.  The package evaluates outcome distributions under
exchangeable probability rules, tracks what-is-known states event by
event, searches rule/shape combinations for representability, checks
itself against brute-force oracles, and translates Born-rule contexts
into ordinary state vectors.
"""

from .context import (
    AlternativeSet,
    AmplitudeAssignment,
    ContextEvent,
    ContextNetwork,
    EpistemicState,
    EventKind,
    KnowabilityLevel,
    apply_event,
    attain,
    build_context,
    canonical_string,
    erase,
    initial_state,
    load_scenario,
    mask_resolution,
    observe,
    parse_scenario,
    promote,
    save_scenario,
    scenario_dict,
)
from .engine import (
    OutcomeDistribution,
    divergence_check,
    eval_auto,
    eval_classical,
    eval_delayed,
    eval_interference,
)
from .errors import (
    AlreadyResolved,
    FinalLayerNotObservable,
    IllegalObservation,
    KnowabilityMismatch,
    KnowctxError,
    NormalizationViolation,
    OutOfOrderEvent,
    PaddingInsufficient,
    PathLimitExceeded,
    RuleContractViolation,
    ScenarioFormatError,
    ShapeMismatch,
    UnsupportedLayerCount,
    UnsupportedRule,
    UnsupportedShape,
    ZeroAmplitudeProjection,
)
from .feasibility import (
    Condition,
    ConstraintSystem,
    DofAccount,
    FeasibilityReport,
    PROPENSITY_FLOOR,
    ShapeSpec,
    Verdict,
    born_admissible,
    build_system,
    dof_count,
    pad_hypothetical,
    real_rule_exclusion,
    sampled_independence_check,
    scan_shapes,
    solve,
)
from .hilbert import (
    StateVector,
    project,
    resolved_joint_vector,
    tensor_basis,
    tensor_context,
    to_state_vector,
)
from .oracle import FrequencyTable, enumerate_paths, mc_sample_classical
from .rules import (
    BORN,
    CLASSICAL,
    Classical,
    GammaModulus,
    ProbabilityRule,
    ROW_TOLERANCE,
    rule_from_name,
    row_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeSet",
    "AlreadyResolved",
    "AmplitudeAssignment",
    "BORN",
    "CLASSICAL",
    "Classical",
    "Condition",
    "ConstraintSystem",
    "ContextEvent",
    "ContextNetwork",
    "DofAccount",
    "EpistemicState",
    "EventKind",
    "FeasibilityReport",
    "FinalLayerNotObservable",
    "FrequencyTable",
    "GammaModulus",
    "IllegalObservation",
    "KnowabilityLevel",
    "KnowabilityMismatch",
    "KnowctxError",
    "NormalizationViolation",
    "OutOfOrderEvent",
    "OutcomeDistribution",
    "PROPENSITY_FLOOR",
    "PaddingInsufficient",
    "PathLimitExceeded",
    "ProbabilityRule",
    "ROW_TOLERANCE",
    "RuleContractViolation",
    "ScenarioFormatError",
    "ShapeMismatch",
    "ShapeSpec",
    "StateVector",
    "UnsupportedLayerCount",
    "UnsupportedRule",
    "UnsupportedShape",
    "Verdict",
    "ZeroAmplitudeProjection",
    "apply_event",
    "attain",
    "born_admissible",
    "build_context",
    "build_system",
    "canonical_string",
    "divergence_check",
    "dof_count",
    "enumerate_paths",
    "erase",
    "eval_auto",
    "eval_classical",
    "eval_delayed",
    "eval_interference",
    "initial_state",
    "load_scenario",
    "mask_resolution",
    "mc_sample_classical",
    "observe",
    "pad_hypothetical",
    "parse_scenario",
    "project",
    "promote",
    "real_rule_exclusion",
    "resolved_joint_vector",
    "rule_from_name",
    "row_deviation",
    "sampled_independence_check",
    "save_scenario",
    "scan_shapes",
    "scenario_dict",
    "solve",
    "tensor_basis",
    "tensor_context",
    "to_state_vector",
]
