"""State-vector translation layer."""

import numpy as np
import pytest

from knowctx import (
    BORN,
    CLASSICAL,
    GammaModulus,
    KnowabilityLevel,
    KnowabilityMismatch,
    NormalizationViolation,
    RuleContractViolation,
    StateVector,
    UnsupportedLayerCount,
    ZeroAmplitudeProjection,
    apply_event,
    build_context,
    eval_classical,
    eval_interference,
    initial_state,
    observe,
    project,
    resolved_joint_vector,
    tensor_basis,
    tensor_context,
    to_state_vector,
)
from conftest import MZ_FIRST, MZ_ROWS, mz_network, random_unitary_net


# ---------------------------------------------------------------------------
# single-layer states
# ---------------------------------------------------------------------------


def test_first_layer_vector(mz):
    vec = to_state_vector(mz, layer=0)
    assert vec.dim == 2
    assert vec.basis_labels == ("A1", "A2")
    assert abs(vec.norm - 1.0) < 1e-9
    assert np.allclose(vec.coords, MZ_FIRST)


def test_propagated_vector_matches_interference(mz):
    vec = to_state_vector(mz, layer=1)
    inter = eval_interference(mz)
    assert np.max(np.abs(np.abs(vec.coords) ** 2 - inter.array)) < 1e-12


def test_norms_preserved_on_random_unitary_networks():
    rng = np.random.default_rng(23)
    for sizes in [(2, 2), (2, 3), (3, 4), (2, 2, 4)]:
        for _ in range(10):
            net = random_unitary_net(rng, sizes)
            for k in range(len(sizes)):
                assert abs(to_state_vector(net, layer=k).norm - 1.0) < 1e-9


def test_nonorthonormal_rows_leak_norm():
    # each row normalized, rows not mutually orthogonal: coherent
    # propagation leaves the unit sphere and must be refused
    net = build_context(
        [(2, KnowabilityLevel.L2), (2, KnowabilityLevel.L3)],
        MZ_FIRST,
        [[[1.0, 0.0], [1.0, 0.0]]],
    )
    with pytest.raises(NormalizationViolation):
        to_state_vector(net, layer=1)


def test_requires_born_rule():
    a = 0.5 ** 0.25
    net = build_context(
        [(2, KnowabilityLevel.L2), (2, KnowabilityLevel.L3)],
        [a, a],
        [[[a, a], [a, -a]]],
        rule=GammaModulus(2.0),
    )
    with pytest.raises(RuleContractViolation):
        to_state_vector(net)
    with pytest.raises(RuleContractViolation):
        tensor_context(net, simultaneously_knowable=True)


def test_state_vector_shape_validation():
    with pytest.raises(ValueError):
        StateVector(coords=np.array([1.0, 0.0]), basis_labels=("only",))


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def test_projection_weights_equal_engine_output(mz):
    vec = to_state_vector(mz, layer=0)
    dist = eval_classical(mz, layer=0)
    for j in range(2):
        _, weight = project(vec, j)
        assert abs(weight - dist.values[j]) < 1e-12


def test_projection_weights_match_engine_on_random_networks():
    rng = np.random.default_rng(29)
    for _ in range(25):
        net = random_unitary_net(rng, (3, 3))
        vec = to_state_vector(net, layer=0)
        dist = eval_classical(net, layer=0)
        for j in range(3):
            try:
                _, weight = project(vec, j)
            except ZeroAmplitudeProjection:
                continue
            assert abs(weight - dist.values[j]) < 1e-12


def test_projection_preserves_phase_and_is_idempotent(mz_l3):
    net = build_context(
        [(2, KnowabilityLevel.L2), (2, KnowabilityLevel.L3)],
        [0.6, 0.8j],
        [MZ_ROWS],
    )
    vec = to_state_vector(net, layer=0)
    post, weight = project(vec, 1)
    assert abs(weight - 0.64) < 1e-12
    assert abs(post.coords[1] - 1j) < 1e-12  # unit modulus, phase kept
    assert abs(post.norm - 1.0) < 1e-12
    again, w2 = project(post, 1)
    assert abs(w2 - 1.0) < 1e-12
    assert np.allclose(again.coords, post.coords)


def test_projection_refuses_zero_amplitude():
    net = build_context(
        [(2, KnowabilityLevel.L2), (2, KnowabilityLevel.L3)],
        [1.0, 0.0],
        [MZ_ROWS],
    )
    vec = to_state_vector(net, layer=0)
    with pytest.raises(ZeroAmplitudeProjection):
        project(vec, 1)


def test_projection_index_range(mz):
    vec = to_state_vector(mz, layer=0)
    with pytest.raises(IndexError):
        project(vec, 2)


# ---------------------------------------------------------------------------
# joint two-layer states
# ---------------------------------------------------------------------------


def test_tensor_context_requires_explicit_flag(mz):
    with pytest.raises(KnowabilityMismatch):
        tensor_context(mz)


def test_tensor_context_coords_are_path_amplitudes(mz):
    joint = tensor_context(mz, simultaneously_knowable=True)
    assert joint.dim == 4
    assert joint.basis_labels[0] == "A1⊗A1'"
    assert joint.basis_labels[1] == "A1⊗A2'"
    expected = (np.asarray(MZ_FIRST)[:, None] * np.asarray(MZ_ROWS)).reshape(-1)
    assert np.allclose(joint.coords, expected, atol=1e-15)
    assert abs(joint.norm - 1.0) < 1e-9


def test_joint_weights_are_path_probabilities(mz):
    joint = tensor_context(mz, simultaneously_knowable=True)
    # |c_j c_jk|^2 must equal classical path weight f(c_j) f(c_jk)
    for j in range(2):
        for k in range(2):
            _, weight = project(joint, 2 * j + k)
            assert abs(weight - 0.25) < 1e-12


def test_tensor_basis_orthonormal_up_to_dim_25():
    rng = np.random.default_rng(31)
    net = random_unitary_net(rng, (5, 5))
    basis = tensor_basis(net, simultaneously_knowable=True)
    assert len(basis) == 25
    mat = np.stack([b.coords for b in basis])
    assert np.max(np.abs(mat @ mat.conj().T - np.eye(25))) < 1e-12
    labels = [b.basis_labels for b in basis]
    assert all(l == labels[0] for l in labels)


def test_tensor_rejects_deeper_chains():
    rng = np.random.default_rng(37)
    net = random_unitary_net(rng, (2, 2, 2))
    with pytest.raises(UnsupportedLayerCount):
        tensor_context(net, simultaneously_knowable=True)
    with pytest.raises(UnsupportedLayerCount):
        tensor_basis(net, simultaneously_knowable=True)


def test_resolved_state_picks_basis_vector(mz_l3):
    state = apply_event(initial_state(mz_l3), observe(0, 0, 1))
    state = apply_event(state, observe(1, 1, 0))
    vec = resolved_joint_vector(state, simultaneously_knowable=True)
    assert vec.basis_labels[np.argmax(np.abs(vec.coords))] == "A2⊗A1'"
    assert abs(vec.norm - 1.0) < 1e-15


def test_unresolved_state_has_no_basis_vector(mz_l3):
    state = apply_event(initial_state(mz_l3), observe(0, 0, 1))
    with pytest.raises(KnowabilityMismatch):
        resolved_joint_vector(state, simultaneously_knowable=True)
