"""Probability rules: maps from amplitudes to propensities.

A rule fixes the function f that turns an amplitude (or a product of
amplitudes along a path) into a nonnegative propensity.  Two families are
supported:

* Classical -- amplitudes are already real propensities and f is the
  identity.  Rows must be real, nonnegative and sum to one.
* GammaModulus(gamma) -- f(x) = |x|^(2*gamma) on complex amplitudes.
  gamma = 1 is the Born rule; rows normalize as sum |x|^(2*gamma) = 1.

Both families are multiplicative, f(x*y) = f(x)*f(y), which is what makes
"apply f to each factor" and "apply f to the whole product" agree on any
single path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RuleContractViolation

# Absolute tolerance for row normalization checks everywhere.
ROW_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ProbabilityRule:
    """Base class.  Concrete rules implement propensity()."""

    def propensity(self, values):
        raise NotImplementedError

    @property
    def is_born(self) -> bool:
        return False

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Classical(ProbabilityRule):
    """Identity rule on real propensities."""

    def propensity(self, values):
        arr = np.asarray(values)
        if np.iscomplexobj(arr):
            if np.max(np.abs(arr.imag), initial=0.0) > ROW_TOLERANCE:
                raise RuleContractViolation(
                    "classical rule acts on real propensities; "
                    "got amplitudes with nonzero imaginary part"
                )
            arr = arr.real
        return np.asarray(arr, dtype=float)

    def describe(self) -> str:
        return "classical"


@dataclass(frozen=True)
class GammaModulus(ProbabilityRule):
    """f(x) = |x|^(2*gamma).  gamma=1 is the Born rule."""

    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma > 0):
            raise RuleContractViolation("gamma must be positive")

    def propensity(self, values):
        arr = np.asarray(values, dtype=complex)
        # Modulus first, then the power: |x|^2 is exact for gamma=1 and the
        # squared modulus avoids a needless sqrt for integer gamma.
        mod2 = arr.real * arr.real + arr.imag * arr.imag
        if self.gamma == 1.0:
            return mod2
        return mod2 ** self.gamma

    @property
    def is_born(self) -> bool:
        return self.gamma == 1.0

    def describe(self) -> str:
        if self.is_born:
            return "born(gamma=1)"
        g = self.gamma
        return f"gamma({int(g) if float(g).is_integer() else g})"


#: The default rule.
BORN = GammaModulus(1.0)
CLASSICAL = Classical()


def rule_from_name(name: str, gamma: float | None = None) -> ProbabilityRule:
    """Build a rule from CLI-style arguments.

    ``name`` is "born" or "classical"; a ``gamma`` value overrides the name
    and selects GammaModulus(gamma).
    """
    if gamma is not None:
        return GammaModulus(float(gamma))
    key = name.strip().lower()
    if key == "born":
        return BORN
    if key == "classical":
        return CLASSICAL
    raise RuleContractViolation(f"unknown rule name: {name!r}")


def row_deviation(rule: ProbabilityRule, row) -> float:
    """|sum of propensities - 1| for one row of amplitudes."""
    return abs(float(np.sum(rule.propensity(row))) - 1.0)
