"""Outcome-distribution evaluators over context networks.

Which formula applies is decided by knowability, not by dynamics.  If the
intermediate alternatives will be known, or may yet become known, each
layer's propensities chain classically:

    p(x') = sum_j f(c_j) f(c_jx')

If the intermediate alternatives can never be known, the amplitudes are
composed first and the rule f is applied to the sum (interference):

    p(x') = f(sum_j c_j c_jx')

The delayed evaluator covers the case where upstream records exist but
have not been read out yet: the outcome law is classical regardless of
when (or whether) the readout eventually happens, because f is
multiplicative along any single path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import ContextNetwork, EpistemicState, KnowabilityLevel
from .errors import KnowabilityMismatch, RuleContractViolation, ShapeMismatch
from .rules import ROW_TOLERANCE, Classical, ProbabilityRule


@dataclass(frozen=True)
class OutcomeDistribution:
    """Propensities or probabilities for one layer's alternatives.

    ``kind`` is "probability" only when the layer will actually be known
    (level 3 at evaluation time); distributions over unknowable or
    still-undecided layers are propensity vectors and are tagged as not
    observable.  A probability vector that fails to normalize under the
    active rule is reported as-is with the deviation recorded and a
    warning attached, never silently rescaled.
    """

    layer: int
    labels: tuple[str, ...]
    values: tuple[float, ...]
    kind: str  # "probability" | "propensity"
    observable: bool
    conditioning: str
    normalization_deviation: float
    warnings: tuple[str, ...] = ()

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def probs(self) -> tuple[float, ...]:
        # Field-name alias; the vector may still be a propensity vector,
        # check ``kind`` before reading it as frequencies.
        return self.values


def _rule_for(net: ContextNetwork, rule: ProbabilityRule | None) -> ProbabilityRule:
    return net.rule if rule is None else rule


def _target_layer(net: ContextNetwork, layer: int | None) -> int:
    k = net.depth - 1 if layer is None else layer
    if not (0 <= k < net.depth):
        raise ShapeMismatch(f"layer {layer} out of range for a {net.depth}-layer context")
    return k


def _chain_classical(net: ContextNetwork, rule: ProbabilityRule, k: int) -> np.ndarray:
    p = np.asarray(rule.propensity(net.first_layer), dtype=float)
    for t in range(k):
        p = p @ np.asarray(rule.propensity(net.transition(t)), dtype=float)
    return p


def _chain_interference(net: ContextNetwork, rule: ProbabilityRule, k: int) -> np.ndarray:
    if isinstance(rule, Classical):
        # There are no amplitudes to sum; classical propensities chain.
        return _chain_classical(net, rule, k)
    amp = net.first_layer
    for t in range(k):
        amp = amp @ net.transition(t)
    return np.asarray(rule.propensity(amp), dtype=float)


def _finish(
    net: ContextNetwork,
    k: int,
    values: np.ndarray,
    level: KnowabilityLevel,
    conditioning: str,
    rule: ProbabilityRule,
    extra_warnings=(),
) -> OutcomeDistribution:
    values = np.asarray(values, dtype=float)
    deviation = abs(float(values.sum()) - 1.0)
    observable = level is KnowabilityLevel.L3
    kind = "probability" if observable else "propensity"
    warnings = list(extra_warnings)
    layer = net.layers[k]
    if level is KnowabilityLevel.L1:
        warnings.append("layer is never knowable: values are propensities, not probabilities")
    elif level is KnowabilityLevel.L2:
        warnings.append("layer is not yet committed to readout: values are propensities")
    if kind == "probability" and deviation > ROW_TOLERANCE:
        warnings.append(
            f"probabilities do not normalize under rule {rule.describe()} "
            f"(deviation {deviation:.3e}); reported verbatim"
        )
    if layer.padded_from is not None:
        warnings.append(
            f"alternatives {layer.padded_from + 1}..{layer.size} are hypothetical padding; "
            "their entries are propensities of counterfactual outcomes"
        )
    return OutcomeDistribution(
        layer=k,
        labels=layer.labels,
        values=tuple(float(v) for v in values),
        kind=kind,
        observable=observable,
        conditioning=conditioning,
        normalization_deviation=deviation,
        warnings=tuple(warnings),
    )


def eval_classical(
    net: ContextNetwork, rule: ProbabilityRule | None = None, layer: int | None = None
) -> OutcomeDistribution:
    """Layer-by-layer chaining of propensities.

    Chaining treats each intermediate alternative as a definite fact
    whose record exists (or still may exist), so it is defined for
    upstream layers at levels 2 and 3 and refused at level 1, where no
    path information can ever exist.
    """
    rule = _rule_for(net, rule)
    k = _target_layer(net, layer)
    for i in range(k):
        if net.layers[i].knowability is KnowabilityLevel.L1:
            raise KnowabilityMismatch(
                f"classical chaining needs path information to exist; "
                f"layer {i} is never knowable"
            )
    values = _chain_classical(net, rule, k)
    return _finish(net, k, values, net.layers[k].knowability, "classical chaining", rule)


def eval_interference(
    net: ContextNetwork, rule: ProbabilityRule | None = None, layer: int | None = None
) -> OutcomeDistribution:
    """Coherent composition: amplitudes sum over indistinguishable paths.

    Requires every upstream layer to be below level 3 (never knowable, or
    not committed to a readout).  Undefined for the classical rule, which
    has no amplitudes to sum.
    """
    rule = _rule_for(net, rule)
    if isinstance(rule, Classical):
        raise RuleContractViolation(
            "interference is undefined under the classical rule: "
            "real propensities carry no phases to sum"
        )
    k = _target_layer(net, layer)
    for i in range(k):
        if net.layers[i].knowability is KnowabilityLevel.L3:
            raise KnowabilityMismatch(
                f"interference requires unknowable (or unread) upstream layers; "
                f"layer {i} will be known"
            )
    values = _chain_interference(net, rule, k)
    upstream = ", ".join(str(i) for i in range(k))
    return _finish(
        net, k, values, net.layers[k].knowability,
        f"amplitudes summed coherently across layer(s) {upstream}" if k else "source amplitudes",
        rule,
    )


def eval_delayed(
    net: ContextNetwork, rule: ProbabilityRule | None = None, layer: int | None = None
) -> OutcomeDistribution:
    """Outcome law when upstream records exist but are read out later.

    Upstream layers must be at level 2 or 3.  The result equals classical
    chaining because the rule is multiplicative along each path; the sum
    here is accumulated in the opposite association order, so agreement
    with eval_classical is a genuine numerical check rather than an
    artifact of running the same code twice.
    """
    rule = _rule_for(net, rule)
    k = _target_layer(net, layer)
    for i in range(k):
        if net.layers[i].knowability is KnowabilityLevel.L1:
            raise KnowabilityMismatch(
                f"delayed evaluation assumes upstream records exist; "
                f"layer {i} is never knowable"
            )
    if k == 0:
        values = np.asarray(rule.propensity(net.first_layer), dtype=float)
    else:
        # Right-to-left accumulation of per-path propensity products.
        acc = np.asarray(rule.propensity(net.transition(k - 1)), dtype=float)
        for t in range(k - 2, -1, -1):
            acc = np.asarray(rule.propensity(net.transition(t)), dtype=float) @ acc
        values = np.asarray(rule.propensity(net.first_layer), dtype=float) @ acc
    return _finish(
        net, k, values, net.layers[k].knowability,
        "delayed readout: classical law independent of readout time", rule,
    )


def eval_auto(
    state: EpistemicState, rule: ProbabilityRule | None = None, layer: int | None = None
) -> OutcomeDistribution:
    """Dispatch on the current epistemic state of each upstream layer.

    Walks the chain source-to-target keeping a classical probability
    vector anchored at the most recent checkpoint (source, a resolved
    layer, or a pending layer) and an open coherent window while passing
    through never-knowable layers.  What opens the window is the layer's
    current level, not whether the specimen has traversed it: a level-1
    record will never exist either way.  Pending level-2/3 layers close
    the window: their records may or will yet exist, so they chain
    classically even though nothing has been read out.  Resolutions
    strictly downstream of the target layer are ignored: this is the
    marginal law given upstream information only.
    """
    net = state.network
    rule = _rule_for(net, rule)
    k = _target_layer(net, layer)

    notes = []
    if state.outcomes[k] is not None:
        values = np.zeros(net.shape[k])
        values[state.outcomes[k]] = 1.0
        label = net.layers[k].labels[state.outcomes[k]]
        return _finish(
            net, k, values, state.current_level(k),
            f"layer {k} already resolved as {label}: point mass", rule,
        )

    def propensities(amps):
        return np.asarray(rule.propensity(amps), dtype=float)

    # p: classical weights over the checkpoint layer's alternatives.
    # window: open coherent amplitude matrix, rows = checkpoint alternatives.
    window: np.ndarray | None = None
    coherent_span: list[int] = []
    if state.outcomes[0] is not None and k > 0:
        p = np.zeros(net.shape[0])
        p[state.outcomes[0]] = 1.0
        notes.append(f"conditioned on {net.layers[0].labels[state.outcomes[0]]} at layer 0")
    elif state.current_level(0) is KnowabilityLevel.L1 and not isinstance(rule, Classical):
        p = np.ones(1)
        window = net.first_layer.reshape(1, -1)
        coherent_span.append(0)
    else:
        if state.current_level(0) is KnowabilityLevel.L1:
            # Classical rule: no amplitudes to keep coherent.
            coherent_span.append(0)
        p = propensities(net.first_layer)

    for t in range(k):
        T = net.transition(t)
        nxt = t + 1
        resolved = state.outcomes[nxt] is not None and nxt < k
        unknowable = state.current_level(nxt) is KnowabilityLevel.L1
        if window is None:
            if unknowable and not isinstance(rule, Classical):
                window = T
                coherent_span.append(nxt)
            else:
                if unknowable:
                    coherent_span.append(nxt)
                p = p @ propensities(T)
        else:
            window = window @ T
            if unknowable:
                coherent_span.append(nxt)
            else:
                p = p @ propensities(window)
                window = None
        if resolved:
            o = state.outcomes[nxt]
            p = np.zeros(net.shape[nxt])
            p[o] = 1.0
            window = None
            notes.append(f"conditioned on {net.layers[nxt].labels[o]} at layer {nxt}")

    if window is not None:
        values = p @ propensities(window)
    else:
        values = p

    if coherent_span:
        span = ", ".join(str(i) for i in coherent_span)
        if isinstance(rule, Classical):
            notes.append(
                f"unknowable layer(s) {span} chain classically (classical rule has no phases)"
            )
        else:
            notes.append(f"amplitudes summed coherently across unknowable layer(s) {span}")
    pending = [
        i for i in range(k)
        if state.outcomes[i] is None and state.current_level(i) is not KnowabilityLevel.L1
    ]
    if pending:
        notes.append(
            "pending layer(s) " + ", ".join(str(i) for i in pending) + " chain classically"
        )
    if not notes:
        notes.append("classical chaining")
    return _finish(net, k, values, state.current_level(k), "; ".join(notes), rule)


def divergence_check(
    net: ContextNetwork, rule: ProbabilityRule | None = None, layer: int | None = None
) -> float:
    """max_x |interference(x) - classical(x)| at the target layer.

    A counterfactual contrast, so no knowability preconditions apply: it
    answers "how much would the outcome law differ if the intermediate
    layers were unknowable rather than known".  Zero for the classical
    rule and for any multiplicative rule on a single-path chain.
    """
    if net.depth < 2:
        raise ShapeMismatch("the contrast needs at least one intermediate layer")
    rule = _rule_for(net, rule)
    k = _target_layer(net, layer)
    classical = _chain_classical(net, rule, k)
    interference = _chain_interference(net, rule, k)
    return float(np.max(np.abs(interference - classical), initial=0.0))
