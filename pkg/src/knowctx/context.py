"""Layered context networks and their epistemic bracket states.

An experimental context is modeled as a linear chain of complete
alternative sets.  Exactly one alternative from each set occurs during a
run.  Each set carries a knowability level:

* level 1 -- never knowable: no record distinguishing the alternatives
  will ever exist;
* level 2 -- may become knowable: a record exists but might be erased or
  might be read out, the choice is still open;
* level 3 -- will become known.

The final set of a proper context is always level 3 (something must
actually be measured).  A complex amplitude weights each first-layer
alternative and each transition between consecutive layers; every row of
amplitudes normalizes under the probability rule in force.

The epistemic state of a run is an ordered list of bracket terms, one per
layer.  A bracket is *unresolved* (each alternative listed together with
the amplitude products of all paths that could reach it), *resolved* (one
alternative was observed), or *collapsed-unknowable* (the layer occurred
but no record can ever say which alternative it was, so only the bare
labels remain).  Events move brackets between these forms and may never
un-resolve anything.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from functools import cached_property

import numpy as np

from .errors import (
    AlreadyResolved,
    FinalLayerNotObservable,
    IllegalObservation,
    NormalizationViolation,
    OutOfOrderEvent,
    ScenarioFormatError,
    ShapeMismatch,
)
from .rules import BORN, CLASSICAL, ROW_TOLERANCE, Classical, ProbabilityRule, row_deviation


class KnowabilityLevel(IntEnum):
    """How much can ever be learned about a layer's realized alternative."""

    L1 = 1  # never knowable
    L2 = 2  # may become knowable
    L3 = 3  # will become known

    @classmethod
    def coerce(cls, value) -> "KnowabilityLevel":
        if isinstance(value, cls):
            return value
        try:
            return cls(int(value))
        except (ValueError, TypeError):
            raise ShapeMismatch(f"knowability level must be 1, 2 or 3, got {value!r}")


def default_labels(layer_index: int, size: int, padded_from: int | None = None) -> tuple[str, ...]:
    """Labels A1', A2', ... with one prime per layer depth.

    Alternatives beyond ``padded_from`` are hypothetical pad entries and get
    a leading tilde so they can never be confused with physical ones.
    """
    primes = "'" * layer_index
    labels = []
    for i in range(size):
        base = f"A{i + 1}{primes}"
        if padded_from is not None and i >= padded_from:
            base = "~" + base
        labels.append(base)
    return tuple(labels)


@dataclass(frozen=True)
class AlternativeSet:
    """One complete set of mutually exclusive alternatives."""

    id: int
    labels: tuple[str, ...]
    knowability: KnowabilityLevel
    padded_from: int | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ShapeMismatch("an alternative set needs at least one alternative")
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch(f"duplicate labels in layer {self.id}")
        if self.padded_from is not None and not (0 < self.padded_from <= self.size):
            raise ShapeMismatch("padded_from must lie inside the label range")

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class AmplitudeAssignment:
    """First-layer amplitude vector plus one transition matrix per layer pair."""

    first_layer: np.ndarray
    transitions: tuple[np.ndarray, ...]

    def __post_init__(self):
        first = np.asarray(self.first_layer, dtype=complex)
        first.flags.writeable = False
        object.__setattr__(self, "first_layer", first)
        mats = []
        for t, mat in enumerate(self.transitions):
            arr = np.asarray(mat, dtype=complex)
            if arr.ndim != 2:
                raise ShapeMismatch(f"transition {t} is not a matrix")
            arr.flags.writeable = False
            mats.append(arr)
        object.__setattr__(self, "transitions", tuple(mats))


@dataclass(frozen=True, eq=False)
class ContextNetwork:
    """A validated linear chain of alternative sets with amplitudes."""

    layers: tuple[AlternativeSet, ...]
    amplitudes: AmplitudeAssignment
    rule: ProbabilityRule = BORN
    name: str = ""
    warnings: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(layer.size for layer in self.layers)

    @property
    def first_layer(self) -> np.ndarray:
        return self.amplitudes.first_layer

    def transition(self, t: int) -> np.ndarray:
        return self.amplitudes.transitions[t]

    @property
    def compact_symbols(self) -> bool:
        # Two-digit alternative indices would make c112 ambiguous, so the
        # compact rendering is only used when every layer stays single-digit.
        return max(self.shape) <= 9


def build_context(
    layers,
    first_layer,
    transitions,
    rule: ProbabilityRule = BORN,
    name: str = "",
    allow_improper: bool = False,
) -> ContextNetwork:
    """Validate and assemble a context network.

    Parameters
    ----------
    layers : sequence of (size, knowability) pairs or AlternativeSet
        The chain of alternative sets, first to last.
    first_layer : array-like, complex, shape (M0,)
        Amplitudes of the first layer.
    transitions : sequence of array-like, transitions[t] has shape (M_t, M_{t+1})
        Amplitudes for each consecutive layer pair.
    rule : ProbabilityRule
        Rule under which every amplitude row must normalize.
    allow_improper : bool
        Permit a final layer below level 3.  Such a network supports
        propensity bookkeeping only; it does not describe a completable
        experiment and a warning is attached.

    Raises
    ------
    ShapeMismatch, FinalLayerNotObservable, NormalizationViolation
    """
    sets = []
    for i, entry in enumerate(layers):
        if isinstance(entry, AlternativeSet):
            sets.append(entry)
            continue
        size, level = entry
        size = int(size)
        if size < 1:
            raise ShapeMismatch(f"layer {i}: size must be >= 1, got {size}")
        sets.append(
            AlternativeSet(id=i, labels=default_labels(i, size), knowability=KnowabilityLevel.coerce(level))
        )
    if not sets:
        raise ShapeMismatch("a context needs at least one layer")

    warnings = []
    if sets[-1].knowability is not KnowabilityLevel.L3:
        if not allow_improper:
            raise FinalLayerNotObservable(
                "the final alternative set must be will-be-known (level 3); "
                "a run has to end in an actual observation"
            )
        warnings.append(
            "improper context: final layer is not will-be-known; "
            "outputs for it are propensities, not probabilities"
        )
    for i in range(len(sets) - 1):
        if sets[i].knowability is KnowabilityLevel.L1 and sets[i + 1].knowability is KnowabilityLevel.L1:
            warnings.append(
                f"layers {i} and {i + 1} are both never-knowable; "
                "they act as a single merged unknowable stage"
            )

    amps = AmplitudeAssignment(first_layer=first_layer, transitions=tuple(transitions))
    if amps.first_layer.ndim != 1 or amps.first_layer.shape[0] != sets[0].size:
        raise ShapeMismatch(
            f"first layer has {amps.first_layer.shape} amplitudes for {sets[0].size} alternatives"
        )
    if len(amps.transitions) != len(sets) - 1:
        raise ShapeMismatch(
            f"expected {len(sets) - 1} transition matrices, got {len(amps.transitions)}"
        )
    for t, mat in enumerate(amps.transitions):
        want = (sets[t].size, sets[t + 1].size)
        if mat.shape != want:
            raise ShapeMismatch(f"transition {t}: shape {mat.shape} != {want}")

    def check_row(row, where):
        if not np.all(np.isfinite(np.asarray(row, dtype=complex).view(float))):
            raise NormalizationViolation(f"{where}: non-finite amplitude")
        if isinstance(rule, Classical):
            arr = np.asarray(row, dtype=complex)
            if np.max(np.abs(arr.imag), initial=0.0) > ROW_TOLERANCE:
                raise NormalizationViolation(f"{where}: classical propensities must be real")
            if np.min(arr.real, initial=0.0) < -ROW_TOLERANCE:
                raise NormalizationViolation(f"{where}: classical propensities must be nonnegative")
        dev = row_deviation(rule, row)
        if dev > ROW_TOLERANCE:
            raise NormalizationViolation(
                f"{where}: row normalizes to 1{dev:+.3e} under rule {rule.describe()}"
            )

    check_row(amps.first_layer, "first layer")
    for t, mat in enumerate(amps.transitions):
        for j in range(mat.shape[0]):
            check_row(mat[j], f"transition {t}, row {j}")

    return ContextNetwork(
        layers=tuple(sets),
        amplitudes=amps,
        rule=rule,
        name=name,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------


class EventKind(str, Enum):
    ATTAIN = "attain"
    OBSERVE = "observe"
    ERASE = "erase"
    PROMOTE = "promote"


@dataclass(frozen=True)
class ContextEvent:
    """A timestamped change to what is (or can be) known about a layer.

    Timestamps are abstract integers; only their strict order matters.
    """

    kind: EventKind
    timestamp: int
    layer: int
    outcome: int | None = None
    new_level: KnowabilityLevel | None = None

    def describe(self) -> str:
        if self.kind is EventKind.OBSERVE:
            return f"observe(layer={self.layer}, outcome={self.outcome})"
        if self.kind is EventKind.PROMOTE:
            return f"promote(layer={self.layer}, level={int(self.new_level)})"
        return f"{self.kind.value}(layer={self.layer})"


def attain(timestamp: int, layer: int) -> ContextEvent:
    """The specimen reaches and passes the layer; nothing is read out."""
    return ContextEvent(EventKind.ATTAIN, timestamp, layer)


def observe(timestamp: int, layer: int, outcome: int) -> ContextEvent:
    """The layer's alternative is read out as ``outcome`` (0-based)."""
    return ContextEvent(EventKind.OBSERVE, timestamp, layer, outcome=outcome)


def erase(timestamp: int, layer: int) -> ContextEvent:
    """A may-become-knowable record is destroyed: level 2 drops to level 1."""
    return ContextEvent(EventKind.ERASE, timestamp, layer)


def promote(timestamp: int, layer: int, new_level: KnowabilityLevel = KnowabilityLevel.L3) -> ContextEvent:
    """A may-become-knowable record is committed to readout: level 2 to 3."""
    return ContextEvent(EventKind.PROMOTE, timestamp, layer, new_level=new_level)


# ---------------------------------------------------------------------------
# Epistemic state
# ---------------------------------------------------------------------------

# Amplitude factors inside bracket expressions.  ("c", j) is the first-layer
# amplitude of alternative j; ("t", t, j, k) is the transition-t amplitude
# from alternative j to alternative k.
Factor = tuple


@dataclass(frozen=True)
class BracketEntry:
    """One alternative of an unresolved bracket with its path expression.

    ``expr`` is a sum of products: a tuple of paths, each path a tuple of
    amplitude factors.
    """

    expr: tuple[tuple[Factor, ...], ...]
    label: str
    index: int


@dataclass(frozen=True)
class UnresolvedBracket:
    entries: tuple[BracketEntry, ...]


@dataclass(frozen=True)
class ResolvedBracket:
    label: str
    index: int


@dataclass(frozen=True)
class CollapsedBracket:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class EpistemicState:
    """What is known, knowable, and already-foreclosed about one run."""

    network: ContextNetwork
    levels: tuple[KnowabilityLevel, ...]
    attained: tuple[bool, ...]
    outcomes: tuple[int | None, ...]
    collapsed: tuple[bool, ...]
    clock: int = -1

    def is_resolved(self, layer: int) -> bool:
        return self.outcomes[layer] is not None

    def current_level(self, layer: int) -> KnowabilityLevel:
        return self.levels[layer]

    @cached_property
    def brackets(self) -> tuple:
        out = []
        for m, layer in enumerate(self.network.layers):
            if self.outcomes[m] is not None:
                j = self.outcomes[m]
                out.append(ResolvedBracket(label=layer.labels[j], index=j))
            elif self.collapsed[m]:
                out.append(CollapsedBracket(labels=layer.labels))
            else:
                entries = tuple(
                    BracketEntry(expr=_paths_to(self, m, x), label=layer.labels[x], index=x)
                    for x in range(layer.size)
                )
                out.append(UnresolvedBracket(entries=entries))
        return tuple(out)


def _paths_to(state: EpistemicState, m: int, x: int) -> tuple:
    """All amplitude-product paths reaching alternative x of layer m.

    Paths start at the nearest resolved layer strictly below m (conditioning
    on its observed alternative and dropping everything further upstream), or
    at the source if no upstream layer is resolved.  Intermediate layers are
    summed over whether they are pending or collapsed: a pending layer's
    alternatives are simply not yet distinguished, a collapsed layer's never
    will be.
    """
    resolved_below = [i for i in range(m) if state.outcomes[i] is not None]
    start = resolved_below[-1] if resolved_below else None
    sizes = state.network.shape
    if start is None:
        free = list(range(0, m))  # layer indices whose alternative is summed over
        prefix: tuple[int, ...] = ()
        first_layer_free = True
    else:
        free = list(range(start + 1, m))
        prefix = (state.outcomes[start],)
        first_layer_free = False

    paths = []
    for combo in itertools.product(*(range(sizes[i]) for i in free)):
        chain = prefix + combo + (x,)
        base = start if start is not None else 0
        factors: list[Factor] = []
        if first_layer_free:
            factors.append(("c", chain[0]))
        for offset in range(len(chain) - 1):
            t = base + offset  # transition from layer t to t+1
            factors.append(("t", t, chain[offset], chain[offset + 1]))
        paths.append(tuple(factors))
    return tuple(paths)


def initial_state(network: ContextNetwork) -> EpistemicState:
    n = network.depth
    return EpistemicState(
        network=network,
        levels=tuple(layer.knowability for layer in network.layers),
        attained=(False,) * n,
        outcomes=(None,) * n,
        collapsed=(False,) * n,
        clock=-1,
    )


def _attain_through(levels, attained, collapsed, layer):
    """Mark layers 0..layer as attained; attaining a never-knowable layer
    forecloses it (collapses the bracket to bare labels)."""
    attained = list(attained)
    collapsed = list(collapsed)
    for i in range(layer + 1):
        if not attained[i]:
            attained[i] = True
            if levels[i] is KnowabilityLevel.L1:
                collapsed[i] = True
    return tuple(attained), tuple(collapsed)


def apply_event(state: EpistemicState, event: ContextEvent) -> EpistemicState:
    """Apply one event, returning the successor state.

    Resolution is monotone: a resolved bracket never reverts, an erased
    record never comes back.  The bracket list itself is conserved; only the
    form of individual brackets changes.
    """
    if event.timestamp <= state.clock:
        raise OutOfOrderEvent(
            f"timestamp {event.timestamp} does not advance the clock (last was {state.clock})"
        )
    if not (0 <= event.layer < state.network.depth):
        raise IllegalObservation(
            f"event targets layer {event.layer} of a {state.network.depth}-layer context"
        )

    m = event.layer
    levels = list(state.levels)
    attained = state.attained
    outcomes = list(state.outcomes)
    collapsed = state.collapsed

    if event.kind is EventKind.ATTAIN:
        attained, collapsed = _attain_through(levels, attained, collapsed, m)

    elif event.kind is EventKind.OBSERVE:
        if outcomes[m] is not None:
            raise AlreadyResolved(f"layer {m} was already observed as outcome {outcomes[m]}")
        if state.collapsed[m]:
            raise IllegalObservation(f"layer {m} is unknowable; no observation can resolve it")
        if levels[m] is not KnowabilityLevel.L3:
            raise IllegalObservation(
                f"layer {m} is at knowability level {int(levels[m])}; "
                "only will-be-known layers can be observed (promote level 2 first)"
            )
        size = state.network.layers[m].size
        if event.outcome is None or not (0 <= event.outcome < size):
            raise IllegalObservation(
                f"outcome {event.outcome} out of range for layer {m} with {size} alternatives"
            )
        # Reading out layer m implies the specimen reached it.
        attained, collapsed = _attain_through(levels, attained, collapsed, m)
        outcomes[m] = event.outcome

    elif event.kind is EventKind.ERASE:
        if outcomes[m] is not None:
            raise AlreadyResolved(f"layer {m} is already resolved; its record cannot be erased")
        if levels[m] is not KnowabilityLevel.L2:
            raise IllegalObservation(
                f"only may-become-knowable (level 2) records can be erased; "
                f"layer {m} is at level {int(levels[m])}"
            )
        levels[m] = KnowabilityLevel.L1
        if attained[m]:
            collapsed = tuple(
                c or (i == m) for i, c in enumerate(collapsed)
            )

    elif event.kind is EventKind.PROMOTE:
        if outcomes[m] is not None:
            raise AlreadyResolved(f"layer {m} is already resolved")
        if event.new_level is not KnowabilityLevel.L3:
            raise IllegalObservation("promotion only goes to level 3")
        if levels[m] is not KnowabilityLevel.L2:
            raise IllegalObservation(
                f"only may-become-knowable (level 2) layers can be promoted; "
                f"layer {m} is at level {int(levels[m])}"
            )
        levels[m] = KnowabilityLevel.L3

    else:  # pragma: no cover - enum is closed
        raise IllegalObservation(f"unknown event kind {event.kind!r}")

    return EpistemicState(
        network=state.network,
        levels=tuple(levels),
        attained=attained,
        outcomes=tuple(outcomes),
        collapsed=collapsed,
        clock=event.timestamp,
    )


def mask_resolution(state: EpistemicState, layer: int) -> EpistemicState:
    """State with one layer's resolution hidden (used for predictive laws)."""
    if state.outcomes[layer] is None:
        return state
    outcomes = list(state.outcomes)
    outcomes[layer] = None
    return replace(state, outcomes=tuple(outcomes))


# ---------------------------------------------------------------------------
# Canonical rendering
# ---------------------------------------------------------------------------


def _render_factor(factor: Factor, compact: bool) -> str:
    if factor[0] == "c":
        j = factor[1] + 1
        return f"c{j}" if compact and j <= 9 else f"c({j})"
    _, t, j, k = factor
    prefix = "c" + "'" * t
    j, k = j + 1, k + 1
    if compact and j <= 9 and k <= 9:
        return f"{prefix}{j}{k}"
    return f"{prefix}({j},{k})"


def _render_expr(expr, compact: bool) -> str:
    return " + ".join(" ".join(_render_factor(f, compact) for f in path) for path in expr)


def canonical_string(state: EpistemicState) -> str:
    """Deterministic one-line rendering of the bracket list.

    One bracket per layer, no separator between brackets.  Unresolved
    brackets list ``(expression|label)`` entries separated by single spaces;
    path products are space-joined symbols and path sums use `` + ``.
    Resolved brackets are the bare observed label; collapsed brackets list
    all labels.  First-layer amplitudes render as c1, c2, ...; transition
    amplitudes as c11, c12 (one prime per later transition: c'11).  Networks
    with any layer wider than 9 switch to the delimited forms c(10) and
    c(10,2).
    """
    compact = state.network.compact_symbols
    parts = []
    for bracket in state.brackets:
        if isinstance(bracket, ResolvedBracket):
            inner = bracket.label
        elif isinstance(bracket, CollapsedBracket):
            inner = " ".join(bracket.labels)
        else:
            inner = " ".join(
                f"({_render_expr(entry.expr, compact)}|{entry.label})" for entry in bracket.entries
            )
        parts.append(f"[{inner}]")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------

_TOP_KEYS = {"name", "layers", "first_layer", "transitions", "events"}
_LAYER_KEYS = {"size", "knowability"}
_EVENT_KEYS = {"n", "kind", "layer", "outcome"}


def _is_list(value) -> bool:
    return isinstance(value, list)


def _complex_pair(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ScenarioFormatError(f"{where}: expected [re, im] pair, got {value!r}")
    return complex(value[0], value[1])


def parse_scenario(
    data: dict, rule: ProbabilityRule = BORN
) -> tuple[ContextNetwork, list[ContextEvent]]:
    """Turn a scenario document (already-parsed JSON) into a network and
    its event list.

    Unknown fields are rejected rather than ignored: a typo in a scenario
    should fail loudly, not silently change the experiment.  Improper
    networks (final layer below level 3) are accepted here with a warning
    so that propensity-only scenarios remain loadable.
    """
    if not isinstance(data, dict):
        raise ScenarioFormatError("scenario must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ScenarioFormatError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")
    for key in ("layers", "first_layer", "transitions"):
        if key not in data:
            raise ScenarioFormatError(f"missing required field: {key}")

    name = data.get("name", "")
    if not isinstance(name, str):
        raise ScenarioFormatError("name: expected a string")

    layers_raw = data["layers"]
    if not _is_list(layers_raw) or not layers_raw:
        raise ScenarioFormatError("layers: expected a non-empty array")
    layer_specs = []
    for i, entry in enumerate(layers_raw):
        if not isinstance(entry, dict):
            raise ScenarioFormatError(f"layers[{i}]: expected an object")
        unknown = set(entry) - _LAYER_KEYS
        if unknown:
            raise ScenarioFormatError(f"layers[{i}]: unknown field(s): {', '.join(sorted(unknown))}")
        if "size" not in entry or "knowability" not in entry:
            raise ScenarioFormatError(f"layers[{i}]: needs size and knowability")
        size, level = entry["size"], entry["knowability"]
        if not isinstance(size, int) or isinstance(size, bool) or size < 1:
            raise ScenarioFormatError(f"layers[{i}].size: expected a positive integer")
        if level not in (1, 2, 3):
            raise ScenarioFormatError(f"layers[{i}].knowability: expected 1, 2 or 3")
        layer_specs.append((size, level))

    first_raw = data["first_layer"]
    if not _is_list(first_raw):
        raise ScenarioFormatError("first_layer: expected an array of [re, im] pairs")
    first = [_complex_pair(v, f"first_layer[{j}]") for j, v in enumerate(first_raw)]

    trans_raw = data["transitions"]
    if not _is_list(trans_raw):
        raise ScenarioFormatError("transitions: expected an array of matrices")
    transitions = []
    for t, mat in enumerate(trans_raw):
        if not _is_list(mat):
            raise ScenarioFormatError(f"transitions[{t}]: expected a matrix")
        rows = []
        for j, row in enumerate(mat):
            if not _is_list(row):
                raise ScenarioFormatError(f"transitions[{t}][{j}]: expected a row")
            rows.append([_complex_pair(v, f"transitions[{t}][{j}][{k}]") for k, v in enumerate(row)])
        transitions.append(np.array(rows, dtype=complex) if rows else np.zeros((0, 0), complex))

    network = build_context(
        layer_specs, first, transitions, rule=rule, name=name, allow_improper=True
    )

    events = []
    events_raw = data.get("events", [])
    if not _is_list(events_raw):
        raise ScenarioFormatError("events: expected an array")
    for i, entry in enumerate(events_raw):
        if not isinstance(entry, dict):
            raise ScenarioFormatError(f"events[{i}]: expected an object")
        unknown = set(entry) - _EVENT_KEYS
        if unknown:
            raise ScenarioFormatError(f"events[{i}]: unknown field(s): {', '.join(sorted(unknown))}")
        for key in ("n", "kind", "layer"):
            if key not in entry:
                raise ScenarioFormatError(f"events[{i}]: needs n, kind and layer")
        n, kind, layer = entry["n"], entry["kind"], entry["layer"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ScenarioFormatError(f"events[{i}].n: expected an integer timestamp")
        if not isinstance(layer, int) or isinstance(layer, bool):
            raise ScenarioFormatError(f"events[{i}].layer: expected an integer layer index")
        try:
            kind_enum = EventKind(kind)
        except ValueError:
            raise ScenarioFormatError(
                f"events[{i}].kind: expected one of attain/observe/erase/promote, got {kind!r}"
            )
        outcome = entry.get("outcome")
        if kind_enum is EventKind.OBSERVE:
            if not isinstance(outcome, int) or isinstance(outcome, bool):
                raise ScenarioFormatError(f"events[{i}].outcome: observe needs an integer outcome")
        elif outcome is not None:
            raise ScenarioFormatError(f"events[{i}]: only observe events carry an outcome")
        if kind_enum is EventKind.PROMOTE:
            # A promote event always commits the record to readout (level 3).
            events.append(promote(n, layer))
        elif kind_enum is EventKind.OBSERVE:
            events.append(observe(n, layer, outcome))
        elif kind_enum is EventKind.ERASE:
            events.append(erase(n, layer))
        else:
            events.append(attain(n, layer))

    return network, events


def scenario_dict(network: ContextNetwork, events=()) -> dict:
    """Serialize a network and event list back into a scenario document."""
    return {
        "name": network.name,
        "layers": [
            {"size": layer.size, "knowability": int(layer.knowability)} for layer in network.layers
        ],
        "first_layer": [[float(c.real), float(c.imag)] for c in network.first_layer],
        "transitions": [
            [[[float(c.real), float(c.imag)] for c in row] for row in mat]
            for mat in network.amplitudes.transitions
        ],
        "events": [_event_dict(ev) for ev in events],
    }


def _event_dict(ev: ContextEvent) -> dict:
    out = {"n": ev.timestamp, "kind": ev.kind.value, "layer": ev.layer}
    if ev.kind is EventKind.OBSERVE:
        out["outcome"] = ev.outcome
    return out


def load_scenario(path, rule: ProbabilityRule = BORN):
    """Read a scenario JSON file.  Malformed JSON reports its line number."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_scenario(data, rule=rule)


def save_scenario(path, network: ContextNetwork, events=()):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_dict(network, events), fh, indent=2)
        fh.write("\n")
