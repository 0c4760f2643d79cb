"""Independent checks on the evaluators.

Two deliberately separate routes to the same classical numbers:

* enumerate_paths -- exhaustive pure-Python sum over every path through
  the chain.  It shares no array code with the engine (it even applies
  the rule to each scalar factor itself), so agreement is evidence, not
  tautology.
* mc_sample_classical -- seeded Monte Carlo runs of the classical path
  dynamics, layer by layer.

Sampling is blocked: trials are split into fixed-size blocks and block b
draws from its own child seed (seed, b).  Totals are plain sums of block
counts, so any distribution of blocks over workers, or any processing
order, reproduces the identical table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .context import ContextNetwork, KnowabilityLevel
from .engine import _target_layer
from .errors import KnowabilityMismatch, NormalizationViolation, PathLimitExceeded
from .rules import Classical, GammaModulus, ProbabilityRule

# Exhaustive enumeration refuses beyond this many paths.
PATH_LIMIT = 10**6

# Fixed Monte Carlo block size.  Not a knob: a fixed block grid is what makes
# the counts independent of how blocks are sharded across workers.
BLOCK_TRIALS = 65536

GENERATOR_NAME = "PCG64"


def _require_knowable_through(net: ContextNetwork, k: int):
    for i in range(k + 1):
        if net.layers[i].knowability is not KnowabilityLevel.L3:
            raise KnowabilityMismatch(
                f"layer {i} is at level {int(net.layers[i].knowability)}, not 3; "
                "no record of it will ever exist, so there is nothing to tally"
            )


def _scalar_propensity(rule: ProbabilityRule, z: complex) -> float:
    # Local re-implementation of the rule, kept separate from rules.py on
    # purpose: the oracle should not inherit a bug from the code it checks.
    if isinstance(rule, Classical):
        return float(z.real)
    if isinstance(rule, GammaModulus):
        return float((z.real * z.real + z.imag * z.imag) ** rule.gamma)
    raise NotImplementedError(f"no scalar propensity for {rule!r}")


def enumerate_paths(
    net: ContextNetwork, rule: ProbabilityRule | None = None, layer: int | None = None
) -> np.ndarray:
    """Classical outcome propensities by summing every path explicitly.

    Defined only where classical probability applies: every layer through
    the target must be will-be-known (level 3).  Raises PathLimitExceeded
    when the chain has more than PATH_LIMIT paths.
    """
    rule = net.rule if rule is None else rule
    k = _target_layer(net, layer)
    _require_knowable_through(net, k)
    sizes = net.shape[: k + 1]
    total = math.prod(sizes)
    if total > PATH_LIMIT:
        raise PathLimitExceeded(f"{total} paths exceed the enumeration limit of {PATH_LIMIT}")

    first = [complex(z) for z in net.first_layer]
    mats = [[[complex(z) for z in row] for row in net.transition(t)] for t in range(k)]
    acc = [0.0] * sizes[k]
    for path in itertools.product(*(range(s) for s in sizes)):
        w = _scalar_propensity(rule, first[path[0]])
        for t in range(k):
            w *= _scalar_propensity(rule, mats[t][path[t]][path[t + 1]])
        acc[path[k]] += w
    return np.asarray(acc, dtype=float)


@dataclass(frozen=True)
class FrequencyTable:
    """Monte Carlo counts with the exact law and its sampling error."""

    layer: int
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    trials: int
    exact: tuple[float, ...] | None
    seed: int
    generator: str = GENERATOR_NAME
    rule_name: str = ""

    @property
    def freqs(self) -> tuple[float, ...]:
        return tuple(c / self.trials for c in self.counts)

    @property
    def sigma(self) -> tuple[float, ...] | None:
        """Binomial standard error sqrt(p(1-p)/n) of each frequency."""
        if self.exact is None:
            return None
        return tuple(math.sqrt(p * (1.0 - p) / self.trials) for p in self.exact)

    def to_csv(self) -> str:
        lines = ["alternative,count,freq,exact,sigma"]
        sig = self.sigma
        for i, label in enumerate(self.labels):
            exact = "" if self.exact is None else repr(self.exact[i])
            s = "" if sig is None else repr(sig[i])
            lines.append(f"{label},{self.counts[i]},{self.freqs[i]!r},{exact},{s}")
        return "\n".join(lines) + "\n"


def _row_distributions(rule: ProbabilityRule, amps: np.ndarray) -> np.ndarray:
    p = np.asarray(rule.propensity(amps), dtype=float)
    sums = p.sum(axis=-1)
    if np.max(np.abs(sums - 1.0)) > 1e-9:
        raise NormalizationViolation(
            "classical sampling needs each propensity row to be a distribution; "
            f"worst row sums to {sums.flat[int(np.argmax(np.abs(sums - 1.0)))]!r}"
        )
    return p


def mc_sample_classical(
    net: ContextNetwork,
    trials: int,
    seed: int,
    rule: ProbabilityRule | None = None,
    layer: int | None = None,
) -> FrequencyTable:
    """Sample the classical path dynamics and tabulate final outcomes.

    Every layer up to the target must be will-be-known (level 3); sampling
    a which-way record that can never exist would beg the question the
    interference evaluator answers.  Counts are bit-reproducible for a
    given seed and independent of block scheduling.
    """
    rule = net.rule if rule is None else rule
    k = _target_layer(net, layer)
    if trials < 1:
        raise ValueError("trials must be positive")
    _require_knowable_through(net, k)

    p0 = _row_distributions(rule, net.first_layer)
    cum0 = np.cumsum(p0)
    cum0[-1] = 1.0
    cum_t = []
    for t in range(k):
        c = np.cumsum(_row_distributions(rule, net.transition(t)), axis=1)
        c[:, -1] = 1.0
        cum_t.append(c)

    counts = np.zeros(net.shape[k], dtype=np.int64)
    n_blocks = (trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS
    for b in range(n_blocks):
        n = min(BLOCK_TRIALS, trials - b * BLOCK_TRIALS)
        rng = np.random.default_rng(np.random.SeedSequence([seed, b]))
        idx = np.searchsorted(cum0, rng.random(n), side="right")
        np.minimum(idx, len(cum0) - 1, out=idx)
        for t in range(k):
            rows = cum_t[t][idx]
            draws = rng.random(n)
            idx = (rows < draws[:, None]).sum(axis=1)
            np.minimum(idx, cum_t[t].shape[1] - 1, out=idx)
        counts += np.bincount(idx, minlength=net.shape[k])

    try:
        exact = tuple(float(v) for v in enumerate_paths(net, rule, k))
    except PathLimitExceeded:
        exact = None
    return FrequencyTable(
        layer=k,
        labels=net.layers[k].labels,
        counts=tuple(int(c) for c in counts),
        trials=trials,
        exact=exact,
        seed=seed,
        rule_name=rule.describe(),
    )
