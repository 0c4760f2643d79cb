"""Bridge from layered-context bookkeeping to finite-dimensional state vectors.

Only the Born rule admits this translation: squared moduli of vector
coordinates must be exactly the propensities the engine assigns, and norm
preservation under propagation singles out gamma = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import ContextNetwork, EpistemicState
from .engine import _target_layer
from .errors import (
    KnowabilityMismatch,
    NormalizationViolation,
    RuleContractViolation,
    UnsupportedLayerCount,
    ZeroAmplitudeProjection,
)

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex coordinates over a labeled orthonormal basis."""

    coords: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=complex)
        if arr.ndim != 1 or arr.shape[0] != len(self.basis_labels):
            raise ValueError("coords and basis_labels disagree")
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def dim(self) -> int:
        return len(self.basis_labels)


def _require_born(net: ContextNetwork):
    if not getattr(net.rule, "is_born", False):
        raise RuleContractViolation(
            "state vectors exist only under the Born rule (gamma = 1)"
        )


def to_state_vector(net: ContextNetwork, layer: int | None = 0) -> StateVector:
    """Amplitudes of one layer as a unit vector in that layer's basis.

    Layer 0 is the first-layer amplitude vector itself; later layers are
    reached by propagating through the transition matrices.  Propagation
    preserves the norm exactly when transition rows are orthonormal, and a
    norm off by more than NORM_TOLERANCE is rejected rather than rescaled.
    """
    _require_born(net)
    k = _target_layer(net, layer)
    amp = net.first_layer
    for t in range(k):
        amp = amp @ net.transition(t)
    vec = StateVector(coords=amp, basis_labels=net.layers[k].labels)
    if abs(vec.norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationViolation(
            f"layer {k} amplitudes have norm {vec.norm!r}; propagation only "
            "preserves the norm when transition rows are orthonormal"
        )
    return vec


def project(state: StateVector, index: int) -> tuple[StateVector, float]:
    """Project onto one basis alternative.

    Returns the post-projection unit vector (the basis vector, carrying the
    projected coordinate's phase) and the weight |c|^2.  Projection onto an
    alternative with exactly zero amplitude is refused: zero amplitude means
    zero propensity, and a zero-propensity alternative cannot be realized.
    """
    if not (0 <= index < len(state.basis_labels)):
        raise IndexError(f"basis index {index} out of range")
    c = complex(state.coords[index])
    if c == 0:
        raise ZeroAmplitudeProjection(
            f"alternative {state.basis_labels[index]} has amplitude exactly 0"
        )
    coords = np.zeros(len(state.basis_labels), dtype=complex)
    coords[index] = c / abs(c)
    return StateVector(coords=coords, basis_labels=state.basis_labels), float(abs(c) ** 2)


def _require_joint(net: ContextNetwork, simultaneously_knowable: bool):
    if net.depth != 2:
        raise UnsupportedLayerCount(
            f"joint state vectors are built for exactly 2 layers, got {net.depth}"
        )
    if not simultaneously_knowable:
        raise KnowabilityMismatch(
            "a joint basis presumes both layers' alternatives can be known "
            "together; pass simultaneously_knowable=True to assert that"
        )


def _joint_labels(net: ContextNetwork) -> tuple[str, ...]:
    a, b = net.layers
    return tuple(f"{la}⊗{lb}" for la in a.labels for lb in b.labels)


def tensor_context(
    net: ContextNetwork, *, simultaneously_knowable: bool = False
) -> StateVector:
    """Joint two-layer state on the product basis, labels in (j, k) order.

    The caller must assert joint knowability explicitly: nothing in the
    amplitude data itself says the two layers' records can coexist.
    """
    _require_born(net)
    _require_joint(net, simultaneously_knowable)
    joint = net.first_layer[:, None] * net.transition(0)
    vec = StateVector(coords=joint.reshape(-1), basis_labels=_joint_labels(net))
    if abs(vec.norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationViolation(f"joint state has norm {vec.norm!r}")
    return vec


def tensor_basis(
    net: ContextNetwork, *, simultaneously_knowable: bool = False
) -> tuple[StateVector, ...]:
    """The product basis itself, one unit vector per joint alternative."""
    _require_joint(net, simultaneously_knowable)
    labels = _joint_labels(net)
    dim = len(labels)
    eye = np.eye(dim, dtype=complex)
    return tuple(StateVector(coords=eye[i], basis_labels=labels) for i in range(dim))


def resolved_joint_vector(
    state: EpistemicState, *, simultaneously_knowable: bool = False
) -> StateVector:
    """Product basis vector picked out by a fully resolved two-layer state.

    Once both layers carry recorded outcomes (j, k), the joint description
    degenerates to the single basis direction labeled by them.
    """
    net = state.network
    _require_born(net)
    _require_joint(net, simultaneously_knowable)
    if any(outcome is None for outcome in state.outcomes):
        raise KnowabilityMismatch(
            "only a fully resolved state singles out a product basis vector"
        )
    j, k = state.outcomes
    index = j * net.layers[1].size + k
    return tensor_basis(net, simultaneously_knowable=True)[index]
