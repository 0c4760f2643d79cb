"""Shared builders for the test suite.

Random-network construction lives here so every test file draws from the
same, seeded generators.  Two flavors matter:

* row-normalized nets: each transition row normalizes under the rule;
  enough for classical chaining.
* row-orthonormal nets: transition rows are mutually orthogonal unit
  vectors (needs nondecreasing layer sizes); these propagate coherently
  without leaking norm, which the interference evaluator requires.
"""

import math

import numpy as np
import pytest

from knowctx import (
    BORN,
    CLASSICAL,
    ContextNetwork,
    GammaModulus,
    KnowabilityLevel,
    build_context,
)

S = math.sqrt(0.5)

MZ_FIRST = [S, S]
MZ_ROWS = [[S, 1j * S], [S, -1j * S]]


def mz_network(middle_level=KnowabilityLevel.L2, name="mz"):
    """Two-layer balanced interferometer.

    The middle (first) layer defaults to level 2 so that both the
    classical and the coherent evaluator accept the same network: which
    one applies is then purely a question about what happens to the
    record, not about the amplitudes.
    """
    return build_context(
        [(2, middle_level), (2, KnowabilityLevel.L3)],
        MZ_FIRST,
        [MZ_ROWS],
        rule=BORN,
        name=name,
    )


def row_orthonormal(rng, m, m_prime):
    """Random (m, m_prime) complex matrix with orthonormal rows; m <= m_prime."""
    assert m <= m_prime
    raw = rng.standard_normal((m_prime, m)) + 1j * rng.standard_normal((m_prime, m))
    q, _ = np.linalg.qr(raw)
    return q[:, :m].T.copy()


def born_first_layer(rng, m):
    raw = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return raw / np.linalg.norm(raw)


def random_unitary_net(rng, sizes, levels=None, name=""):
    """Born network whose transitions all have orthonormal rows.

    Sizes must be nondecreasing.  Intermediate layers default to level 2
    (legal for every evaluator), final layer to level 3.
    """
    if levels is None:
        levels = [KnowabilityLevel.L2] * (len(sizes) - 1) + [KnowabilityLevel.L3]
    first = born_first_layer(rng, sizes[0])
    mats = [row_orthonormal(rng, sizes[t], sizes[t + 1]) for t in range(len(sizes) - 1)]
    return build_context(list(zip(sizes, levels)), first, mats, rule=BORN, name=name)


def random_born_net(rng, sizes, levels=None, name=""):
    """Born network with row-normalized (not necessarily orthogonal) rows.

    Any size profile works; classical chaining and path enumeration are
    well defined, coherent propagation generally is not.
    """
    if levels is None:
        levels = [KnowabilityLevel.L2] * (len(sizes) - 1) + [KnowabilityLevel.L3]
    first = born_first_layer(rng, sizes[0])
    mats = []
    for t in range(len(sizes) - 1):
        raw = rng.standard_normal((sizes[t], sizes[t + 1])) + 1j * rng.standard_normal(
            (sizes[t], sizes[t + 1])
        )
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        mats.append(raw)
    return build_context(list(zip(sizes, levels)), first, mats, rule=BORN, name=name)


def random_classical_net(rng, sizes, levels=None, name=""):
    if levels is None:
        levels = [KnowabilityLevel.L3] * len(sizes)
    first = rng.random(sizes[0]) + 0.05
    first /= first.sum()
    mats = []
    for t in range(len(sizes) - 1):
        raw = rng.random((sizes[t], sizes[t + 1])) + 0.05
        raw /= raw.sum(axis=1, keepdims=True)
        mats.append(raw)
    return build_context(list(zip(sizes, levels)), first, mats, rule=CLASSICAL, name=name)


def gamma_normalized_rows(rng, m, m_prime, gamma):
    """Rows normalized under f(x) = |x|^(2*gamma): sum_k |c_jk|^(2g) = 1."""
    raw = rng.standard_normal((m, m_prime)) + 1j * rng.standard_normal((m, m_prime))
    scale = (np.abs(raw) ** (2.0 * gamma)).sum(axis=1) ** (-1.0 / (2.0 * gamma))
    return raw * scale[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mz():
    return mz_network()


@pytest.fixture
def mz_l1():
    return mz_network(middle_level=KnowabilityLevel.L1, name="mz-unknowable")


@pytest.fixture
def mz_l3():
    return mz_network(middle_level=KnowabilityLevel.L3, name="mz-recorded")
