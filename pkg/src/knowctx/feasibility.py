"""Feasibility lab: can a rule represent arbitrary propensities on a shape?

For a two-layer context with M first-layer and M' second-layer
alternatives, a rule f(x) = |x|^(2g) must send every f-normalized first
layer to a normalized output law:

    sum_x' f(sum_j c_j c_jx') = 1    whenever  sum_j f(c_j) = 1.

For integer g the left side is a homogeneous polynomial form of degree
(g, g) in the first-layer components and their conjugates, so demanding
the identity is the same as matching monomial coefficients.  Writing

    T[A, B] = sum_x'  prod_{a in A} c_ax'  *  prod_{b in B} conj(c_bx')

for size-g multisets A, B of row indices, coefficient matching demands
(up to positive multinomial factors that do not move the zero set):

    T[A, A] = 1  when A repeats a single row  (the row g-norms), and
    T[A, B] = 0  for every other unordered pair, including mixed
                 diagonal pairs A = B that touch several rows.

Each pure-diagonal condition is one real residual (T is automatically
real there); every other pair contributes a real and an imaginary
residual.  At g = 1 this is exactly row orthonormality; at g = 2 and
(2,2) it reproduces the known four cross conditions plus two row norms,
ten real residuals over eight unknowns.

Degenerate escape hatch, and why it is closed: for every g, matrices
with exactly one nonzero unit-modulus entry per row and per column solve
all T conditions.  Such a witness gives some alternatives exactly zero
propensity, which contradicts the standing assumption that every drawn
edge of a fully connected context carries nonzero propensity (zero
amplitude if and only if zero propensity).  solve() therefore demands
min |c|^2 >= PROPENSITY_FLOOR of any witness and steers the search away
from the degenerate set with a hinge penalty.  The floor is reported.

Non-integer g has no polynomial expansion (|x|^(2g) is not polynomial
in the real coordinates); those rules get a sampled system instead: row
g-norms plus the normalization deviation at a fixed set of random
f-normalized first layers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .context import ContextNetwork, AlternativeSet, build_context, default_labels
from .errors import (
    NormalizationViolation,
    PaddingInsufficient,
    ShapeMismatch,
    UnsupportedRule,
    UnsupportedShape,
)
from .rules import Classical, GammaModulus, ProbabilityRule

# Genericity floor: every transition amplitude of a witness must carry at
# least this much propensity.  Excludes the permutation-type degenerate
# solutions described in the module docstring.
PROPENSITY_FLOOR = 1e-4

FEASIBLE_TOLERANCE = 1e-9
REFUTATION_THRESHOLD = 1e-3

GENERATOR_NAME = "PCG64"


@dataclass(frozen=True)
class ShapeSpec:
    """Sizes (M, M') of a two-layer context."""

    m: int
    m_prime: int

    def __post_init__(self):
        if self.m < 1 or self.m_prime < 1:
            raise ShapeMismatch(f"shape sizes must be >= 1, got {(self.m, self.m_prime)}")


def born_admissible(shape: ShapeSpec) -> bool:
    """Parameter-counting bound for the Born rule: M' >= M - 1.

    Necessary-direction counting only: it compares free real parameters
    against required independent propensities and says nothing about
    whether the condition system actually has solutions.
    """
    return shape.m_prime >= shape.m - 1


@dataclass(frozen=True)
class DofAccount:
    """Free real parameters versus independent propensities to produce."""

    unknowns: int
    conditions: int
    available: int
    required: int
    first_layer_unknowns: int
    first_layer_conditions: int
    first_layer_available: int
    first_layer_required: int
    notes: tuple[str, ...] = ()

    @property
    def deficit(self) -> int:
        """required - available; positive means not enough freedom."""
        return self.required - self.available


def _integer_gamma(rule: ProbabilityRule) -> int | None:
    if isinstance(rule, GammaModulus) and float(rule.gamma).is_integer() and rule.gamma >= 1:
        return int(rule.gamma)
    return None


def _require_gamma(rule: ProbabilityRule) -> GammaModulus:
    if isinstance(rule, Classical):
        raise UnsupportedRule(
            "the identity rule has no constraint system: it is excluded before "
            "counting starts because it produces no interference at all"
        )
    if not isinstance(rule, GammaModulus):
        raise UnsupportedRule(f"no constraint system for rule {rule!r}")
    return rule


def dof_count(shape: ShapeSpec, rule: ProbabilityRule) -> DofAccount:
    """Degree-of-freedom account for the polynomial condition system.

    Only defined for integer gamma (the condition count of a sampled
    system is a sampling choice, not a property of the rule).
    """
    gamma = _integer_gamma(_require_gamma(rule))
    if gamma is None:
        raise UnsupportedRule(
            "no closed-form condition count for non-integer gamma; "
            "use the sampled system instead"
        )
    m, mp = shape.m, shape.m_prime
    n_multisets = math.comb(m + gamma - 1, gamma)
    conditions = n_multisets * (n_multisets + 1) - m
    unknowns = 2 * m * mp
    notes = []
    if gamma == 1:
        notes.append(
            f"gamma=1 closed form: conditions = M + M(M-1) = {m * m}; "
            f"available = 2MM' - M(M-1) - M"
        )
    return DofAccount(
        unknowns=unknowns,
        conditions=conditions,
        available=unknowns - conditions,
        required=m * (mp - 1),
        first_layer_unknowns=2 * m,
        first_layer_conditions=1,
        first_layer_available=2 * m - 1,
        first_layer_required=m - 1,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class Condition:
    """T[A, B] = target, with A, B size-gamma multisets of row indices."""

    rows_left: tuple[int, ...]
    rows_right: tuple[int, ...]
    target: float

    @property
    def pure(self) -> bool:
        # Pure diagonal: both sides the same single repeated row.
        return self.rows_left == self.rows_right and len(set(self.rows_left)) == 1

    def describe(self) -> str:
        left = ",".join(str(j + 1) for j in self.rows_left)
        right = ",".join(str(j + 1) for j in self.rows_right)
        if self.pure:
            return f"norm(row {self.rows_left[0] + 1}) = 1"
        return f"T[{left}|{right}] = 0"


class ConstraintSystem:
    """Stacked real residuals for one (shape, rule) pair.

    mode "polynomial": the coefficient-matching conditions described in
    the module docstring, exact and finite.  mode "sampled": row g-norms
    plus universal-normalization deviations at fixed random first layers
    (the only option for non-integer gamma).
    """

    def __init__(
        self,
        shape: ShapeSpec,
        rule: GammaModulus,
        mode: str,
        conditions: tuple[Condition, ...] = (),
        samples: np.ndarray | None = None,
        sample_seed: int | None = None,
        dof: DofAccount | None = None,
    ):
        self.shape = shape
        self.rule = rule
        self.mode = mode
        self.conditions = conditions
        self.samples = samples
        self.sample_seed = sample_seed
        self.dof = dof
        self.n_unknowns = 2 * shape.m * shape.m_prime
        if mode == "polynomial":
            self._prepare_polynomial()
            self.residual_count = self._n_rows
        else:
            self.residual_count = shape.m + samples.shape[0]

    # -- packing ----------------------------------------------------------

    def unpack(self, x: np.ndarray) -> np.ndarray:
        """Real unknown vector -> complex (M, M') amplitude matrix."""
        half = self.n_unknowns // 2
        m, mp = self.shape.m, self.shape.m_prime
        return (x[:half] + 1j * x[half:]).reshape(m, mp)

    def pack(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=complex).reshape(self.shape.m, self.shape.m_prime)
        return np.concatenate([c.real.reshape(-1), c.imag.reshape(-1)])

    # -- polynomial mode ---------------------------------------------------

    def _prepare_polynomial(self):
        gamma = int(self.rule.gamma)
        n_cond = len(self.conditions)
        self._A = np.array([c.rows_left for c in self.conditions], dtype=int).reshape(n_cond, gamma)
        self._B = np.array([c.rows_right for c in self.conditions], dtype=int).reshape(n_cond, gamma)
        self._targets = np.array([c.target for c in self.conditions])
        self._two_res = np.array([not c.pure for c in self.conditions])
        self._cond_idx = np.arange(n_cond)
        # Row layout: one Re row per condition, then an Im row right after
        # it for every non-pure condition.
        re_rows, im_rows = [], []
        row = 0
        for c in self.conditions:
            re_rows.append(row)
            row += 1
            if not c.pure:
                im_rows.append(row)
                row += 1
        self._re_rows = np.array(re_rows, dtype=int)
        self._im_rows = np.array(im_rows, dtype=int)
        self._n_rows = row
        self._gamma_int = gamma

    def _poly_eval(self, x: np.ndarray, want_jac: bool):
        g = self._gamma_int
        c_mat = self.unpack(x)
        c_conj = np.conj(c_mat)
        arr_a = c_mat[self._A, :]    # (n_cond, g, M')
        arr_b = c_conj[self._B, :]
        prod_a = arr_a.prod(axis=1)  # (n_cond, M')
        prod_b = arr_b.prod(axis=1)
        vals = (prod_a * prod_b).sum(axis=1) - self._targets

        r = np.empty(self._n_rows)
        r[self._re_rows] = vals.real
        r[self._im_rows] = vals[self._two_res].imag
        if not want_jac:
            return r, None

        n_cond = len(self._targets)
        m, mp = self.shape.m, self.shape.m_prime
        d_z = np.zeros((n_cond, m, mp), dtype=complex)
        d_zc = np.zeros((n_cond, m, mp), dtype=complex)
        for s in range(g):
            # Products with the s-th factor removed (no division: entries
            # may be exactly zero).
            hole_a = np.ones((n_cond, mp), dtype=complex)
            hole_b = np.ones((n_cond, mp), dtype=complex)
            for s2 in range(g):
                if s2 != s:
                    hole_a *= arr_a[:, s2, :]
                    hole_b *= arr_b[:, s2, :]
            d_z[self._cond_idx, self._A[:, s]] += hole_a * prod_b
            d_zc[self._cond_idx, self._B[:, s]] += prod_a * hole_b
        # Wirtinger to real coordinates: d/dU = d/dc + d/dc~, d/dV = i(d/dc - d/dc~).
        d_u = (d_z + d_zc).reshape(n_cond, -1)
        d_v = (1j * (d_z - d_zc)).reshape(n_cond, -1)
        complex_jac = np.concatenate([d_u, d_v], axis=1)  # (n_cond, 2MM')
        jac = np.empty((self._n_rows, self.n_unknowns))
        jac[self._re_rows] = complex_jac.real
        jac[self._im_rows] = complex_jac[self._two_res].imag
        return r, jac

    # -- sampled mode ------------------------------------------------------

    def _sampled_eval(self, x: np.ndarray, want_jac: bool):
        g = self.rule.gamma
        c_mat = self.unpack(x)
        m, mp = self.shape.m, self.shape.m_prime
        mod2_c = (c_mat.real ** 2 + c_mat.imag ** 2)
        r_norm = (mod2_c ** g).sum(axis=1) - 1.0

        z = self.samples @ c_mat                     # (K, M')
        mod2_z = z.real ** 2 + z.imag ** 2
        r_samp = (mod2_z ** g).sum(axis=1) - 1.0
        r = np.concatenate([r_norm, r_samp])
        if not want_jac:
            return r, None

        mm = m * mp
        jac = np.zeros((self.residual_count, self.n_unknowns))
        w_c = np.maximum(mod2_c, 1e-30) ** (g - 1.0)
        for j in range(m):
            sl = slice(j * mp, (j + 1) * mp)
            jac[j, :mm][sl] = 2.0 * g * w_c[j] * c_mat.real[j]
            jac[j, mm:][sl] = 2.0 * g * w_c[j] * c_mat.imag[j]
        w_z = np.maximum(mod2_z, 1e-30) ** (g - 1.0)
        q = self.samples[:, :, None] * np.conj(z)[:, None, :]   # (K, M, M')
        d_u = (2.0 * g) * (w_z[:, None, :] * q.real)
        d_v = (-2.0 * g) * (w_z[:, None, :] * q.imag)
        k = self.samples.shape[0]
        jac[m:, :mm] = d_u.reshape(k, mm)
        jac[m:, mm:] = d_v.reshape(k, mm)
        return r, jac

    # -- public ------------------------------------------------------------

    def residuals(self, x: np.ndarray) -> np.ndarray:
        if self.mode == "polynomial":
            return self._poly_eval(x, False)[0]
        return self._sampled_eval(x, False)[0]

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        if self.mode == "polynomial":
            return self._poly_eval(x, True)[1]
        return self._sampled_eval(x, True)[1]

    def describe_conditions(self) -> tuple[str, ...]:
        if self.mode == "polynomial":
            return tuple(c.describe() for c in self.conditions)
        return (
            f"{self.shape.m} row norm residuals",
            f"{self.samples.shape[0]} sampled universal-normalization residuals "
            f"(seed {self.sample_seed})",
        )


def build_system(
    shape: ShapeSpec,
    rule: ProbabilityRule,
    mode: str | None = None,
    samples: int = 64,
    seed: int = 0,
) -> ConstraintSystem:
    """Assemble the residual system for a shape and rule.

    ``mode`` defaults to "polynomial" for integer gamma and "sampled"
    otherwise.  Sampled systems draw their fixed first-layer sample set
    here, from (seed, 101), so the system itself is deterministic.
    """
    rule = _require_gamma(rule)
    gamma_int = _integer_gamma(rule)
    if mode is None:
        mode = "polynomial" if gamma_int is not None else "sampled"
    if mode == "polynomial":
        if gamma_int is None:
            raise UnsupportedRule(
                f"gamma={rule.gamma} has no polynomial expansion "
                "(|x|^(2*gamma) is not polynomial in the real coordinates); "
                "use sampled mode"
            )
        multisets = list(itertools.combinations_with_replacement(range(shape.m), gamma_int))
        pure = [ms for ms in multisets if len(set(ms)) == 1]
        conds = [Condition(ms, ms, 1.0) for ms in pure]
        for i, a in enumerate(multisets):
            for b in multisets[i:]:
                if a == b and len(set(a)) == 1:
                    continue
                conds.append(Condition(a, b, 0.0))
        system = ConstraintSystem(
            shape, rule, "polynomial",
            conditions=tuple(conds),
            dof=dof_count(shape, rule),
        )
        # The closed-form count and the generated conditions must agree.
        assert system.residual_count == system.dof.conditions
        return system
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if samples < 1:
        raise ValueError("sampled mode needs at least one sample")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 101]))
    raw = rng.standard_normal((samples, shape.m)) + 1j * rng.standard_normal((samples, shape.m))
    scale = (np.abs(raw) ** (2.0 * rule.gamma)).sum(axis=1) ** (-1.0 / (2.0 * rule.gamma))
    return ConstraintSystem(
        shape, rule, "sampled",
        samples=raw * scale[:, None],
        sample_seed=seed,
        dof=dof_count(shape, rule) if gamma_int is not None else None,
    )


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------


def _levenberg_marquardt(fun, jac, x0, max_iterations):
    """Damped least squares.  Damping grows sevenfold on rejection and
    relaxes threefold on acceptance.  Stops when the cost is numerically
    zero, the gradient vanishes, no downhill step can be found, or a
    25-iteration window improves the cost by less than one part in 10^5:
    refuted runs plateau and then creep along the constraint boundary at
    well under that rate, while genuinely converging runs gain orders of
    magnitude per window until they hit the zero-cost stop."""
    x = np.asarray(x0, dtype=float).copy()
    r = fun(x)
    cost = float(r @ r)
    lam = 1e-3
    iterations = 0
    window_cost = cost
    for _ in range(max_iterations):
        iterations += 1
        if cost < 1e-26:
            break
        if iterations % 25 == 0:
            if cost > window_cost * (1.0 - 1e-5):
                break
            window_cost = cost
        jmat = jac(x)
        grad = jmat.T @ r
        if np.linalg.norm(grad, np.inf) < 1e-15:
            break
        normal = jmat.T @ jmat
        diag = np.maximum(np.diag(normal), 1e-12)
        moved = False
        step = None
        for _ in range(60):
            try:
                step = np.linalg.solve(normal + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 7.0
                continue
            x_new = x + step
            r_new = fun(x_new)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                x, r, cost = x_new, r_new, cost_new
                lam = max(lam / 3.0, 1e-14)
                moved = True
                break
            lam *= 7.0
            if lam > 1e15:
                break
        if not moved:
            break
        if np.linalg.norm(step) < 1e-15 * (1.0 + np.linalg.norm(x)):
            break
    return x, math.sqrt(cost), iterations


class Verdict(str, Enum):
    FEASIBLE = "feasible"
    NO_SOLUTION_FOUND = "no_solution_found"
    ANALYTICALLY_INADMISSIBLE = "analytically_inadmissible"


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Outcome of a multi-start attack on one constraint system.

    feasible requires a witness with stacked residual <= tolerance that
    also clears the propensity floor; no_solution_found carries the best
    floor-respecting residual seen; analytically_inadmissible short-cuts
    the numerics when parameter counting alone rules the shape out
    (Born rule only; for other rules the counting deficit is attached as
    a note and the numerics still run).
    """

    shape: ShapeSpec
    rule_name: str
    mode: str
    verdict: Verdict
    reason: str
    restarts: int
    seed: int
    best_residual: float | None
    witness: np.ndarray | None
    dof: DofAccount | None
    jacobian_rank: int | None
    tolerance: float
    refutation_threshold: float
    propensity_floor: float
    all_restarts_refuted: bool | None
    degenerate_excluded: int
    iterations_total: int
    generator: str = GENERATOR_NAME
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = [
                [[float(z.real), float(z.imag)] for z in row] for row in self.witness
            ]
        dof = None
        if self.dof is not None:
            dof = {
                "unknowns": self.dof.unknowns,
                "conditions": self.dof.conditions,
                "available": self.dof.available,
                "required": self.dof.required,
                "first_layer_available": self.dof.first_layer_available,
                "first_layer_required": self.dof.first_layer_required,
                "notes": list(self.dof.notes),
            }
        return {
            "shape": [self.shape.m, self.shape.m_prime],
            "rule": self.rule_name,
            "mode": self.mode,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "restarts": self.restarts,
            "seed": self.seed,
            "generator": self.generator,
            "best_residual": self.best_residual,
            "witness": witness,
            "dof": dof,
            "jacobian_rank": self.jacobian_rank,
            "tolerance": self.tolerance,
            "refutation_threshold": self.refutation_threshold,
            "propensity_floor": self.propensity_floor,
            "all_restarts_refuted": self.all_restarts_refuted,
            "degenerate_excluded": self.degenerate_excluded,
            "iterations_total": self.iterations_total,
            "notes": list(self.notes),
        }


def solve(
    system: ConstraintSystem,
    restarts: int = 32,
    seed: int = 0,
    tolerance: float = FEASIBLE_TOLERANCE,
    refutation_threshold: float = REFUTATION_THRESHOLD,
    max_iterations: int = 500,
    propensity_floor: float = PROPENSITY_FLOOR,
) -> FeasibilityReport:
    """Multi-start damped least squares on the stacked residual vector.

    Deterministic for a given seed: restart r draws its start point from
    the child seed (seed, r), and results are reduced in restart order
    (ties in residual go to the lowest restart index), so any scheduling
    of the restarts reproduces the same report.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    shape = system.shape
    rule_name = system.rule.describe()

    if system.rule.is_born and not born_admissible(shape):
        dof = system.dof
        reason = (
            f"parameter counting: available {dof.available} < required {dof.required} "
            f"(M' = {shape.m_prime} < M - 1 = {shape.m - 1})"
        )
        return FeasibilityReport(
            shape=shape, rule_name=rule_name, mode=system.mode,
            verdict=Verdict.ANALYTICALLY_INADMISSIBLE, reason=reason,
            restarts=restarts, seed=seed,
            best_residual=None, witness=None, dof=dof, jacobian_rank=None,
            tolerance=tolerance, refutation_threshold=refutation_threshold,
            propensity_floor=propensity_floor,
            all_restarts_refuted=None, degenerate_excluded=0, iterations_total=0,
            notes=("numeric attack skipped: the counting bound is decisive for gamma=1",),
        )

    mm = shape.m * shape.m_prime
    floor = propensity_floor

    def mod2_of(x):
        c = system.unpack(x)
        return c.real ** 2 + c.imag ** 2

    def stacked_fun(x):
        mod2 = mod2_of(x).reshape(-1)
        hinge = np.clip(floor - mod2, 0.0, None) / floor
        return np.concatenate([system.residuals(x), hinge])

    def stacked_jac(x):
        half = mm
        sys_jac = system.jacobian(x)
        mod2 = mod2_of(x).reshape(-1)
        active = np.where(mod2 < floor)[0]
        hinge_jac = np.zeros((mm, 2 * mm))
        hinge_jac[active, active] = -2.0 * x[:half][active] / floor
        hinge_jac[active, active + half] = -2.0 * x[half:][active] / floor
        return np.vstack([sys_jac, hinge_jac])

    best_valid = None   # (residual, restart_index, x)
    best_any = None
    degenerate = 0
    iterations_total = 0
    any_below_threshold = False
    for ridx in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, ridx]))
        x0 = rng.standard_normal(2 * mm) * math.sqrt(0.5 / shape.m_prime)
        x, _, iters = _levenberg_marquardt(stacked_fun, stacked_jac, x0, max_iterations)
        iterations_total += iters
        res = float(np.linalg.norm(system.residuals(x)))
        min_prop = float(mod2_of(x).min())
        # The hinge's equilibrium sits a sliver inside the boundary (the
        # penalty must be nonzero to push back), so allow 0.1% penetration.
        # Degenerate permutation points sit many orders of magnitude lower.
        valid = min_prop >= floor * 0.999
        if valid:
            if best_valid is None or res < best_valid[0]:
                best_valid = (res, ridx, x)
            if res < refutation_threshold:
                any_below_threshold = True
        else:
            if res <= tolerance:
                degenerate += 1
            if best_any is None or res < best_any[0]:
                best_any = (res, ridx, x)

    notes = []
    if degenerate:
        notes.append(
            f"{degenerate} restart(s) converged onto permutation-type amplitude "
            f"patterns with some |c|^2 below the propensity floor {floor:g}; "
            "excluded because every alternative of a fully connected context "
            "must keep nonzero propensity"
        )
    if system.dof is not None and system.dof.deficit > 0 and not system.rule.is_born:
        notes.append(
            f"parameter counting already shows a deficit of {system.dof.deficit} "
            f"({system.dof.available} available vs {system.dof.required} required); "
            "the numeric refutation is corroborating evidence"
        )

    if best_valid is not None and best_valid[0] <= tolerance:
        res, ridx, x = best_valid
        witness = system.unpack(x)
        rank = int(np.linalg.matrix_rank(system.jacobian(x)))
        return FeasibilityReport(
            shape=shape, rule_name=rule_name, mode=system.mode,
            verdict=Verdict.FEASIBLE,
            reason=f"restart {ridx} reached residual {res:.3e}",
            restarts=restarts, seed=seed,
            best_residual=res, witness=witness, dof=system.dof,
            jacobian_rank=rank,
            tolerance=tolerance, refutation_threshold=refutation_threshold,
            propensity_floor=propensity_floor,
            all_restarts_refuted=None, degenerate_excluded=degenerate,
            iterations_total=iterations_total, notes=tuple(notes),
        )

    if best_valid is not None:
        best_res, best_ridx, best_x = best_valid
    elif best_any is not None:
        best_res, best_ridx, best_x = best_any
        notes.append(
            "no restart stayed above the propensity floor; best residual "
            "reported from a floor-violating point"
        )
    else:  # pragma: no cover - restarts >= 1 guarantees a candidate
        best_res, best_ridx, best_x = math.inf, -1, None

    refuted = (best_valid is not None) and not any_below_threshold
    if not refuted and best_valid is not None:
        notes.append(
            "inconclusive: some restart dipped below the refutation threshold "
            "without reaching the feasibility tolerance"
        )
    rank = None
    if best_x is not None:
        rank = int(np.linalg.matrix_rank(system.jacobian(best_x)))
    return FeasibilityReport(
        shape=shape, rule_name=rule_name, mode=system.mode,
        verdict=Verdict.NO_SOLUTION_FOUND,
        reason=(
            f"best floor-respecting residual {best_res:.3e} after {restarts} restarts "
            f"(restart {best_ridx})"
        ),
        restarts=restarts, seed=seed,
        best_residual=float(best_res), witness=None, dof=system.dof,
        jacobian_rank=rank,
        tolerance=tolerance, refutation_threshold=refutation_threshold,
        propensity_floor=propensity_floor,
        all_restarts_refuted=refuted, degenerate_excluded=degenerate,
        iterations_total=iterations_total, notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Analytic side doors
# ---------------------------------------------------------------------------


def real_rule_exclusion(shape: ShapeSpec) -> DofAccount:
    """Counting argument against any rule on real amplitudes.

    At (2,2): six real quantities (two first-layer, four transition) are
    related by four conditions (three row normalizations plus the
    unknowable-case normalization, all independent once f is not the
    identity), leaving two free parameters where an experimenter needs
    MM' - 1 = 3 independent propensities.  At the degenerate (1,1) the
    account is 0 vs 0: everything is forced either way.
    """
    if (shape.m, shape.m_prime) == (2, 2):
        return DofAccount(
            unknowns=6,
            conditions=4,
            available=2,
            required=3,
            first_layer_unknowns=2,
            first_layer_conditions=1,
            first_layer_available=1,
            first_layer_required=1,
            notes=(
                "real amplitudes: deficit 1, so no real-argument rule can "
                "represent three independent propensities",
                "complex contrast: first layer 3 available vs 1 required; "
                "transitions 4 available vs 2 required (no deficit)",
            ),
        )
    if (shape.m, shape.m_prime) == (1, 1):
        return DofAccount(
            unknowns=2,
            conditions=2,
            available=0,
            required=0,
            first_layer_unknowns=1,
            first_layer_conditions=1,
            first_layer_available=0,
            first_layer_required=0,
            notes=("degenerate single-alternative case: everything is forced",),
        )
    raise UnsupportedShape(
        "the real-argument exclusion is worked out for (2,2) "
        "(and trivially (1,1)); other shapes add nothing to the argument"
    )


def pad_hypothetical(net: ContextNetwork, target_m_prime: int) -> ContextNetwork:
    """Widen the final layer with hypothetical alternatives.

    New alternatives get tilde labels and exactly zero amplitudes (zero
    propensity: they cannot occur until a solver assigns them weight);
    padded_from records where physical alternatives end.  Raises
    PaddingInsufficient if even the padded shape stays below the counting
    bound M' >= M - 1.
    """
    if net.depth < 2:
        raise ShapeMismatch("padding needs a transition layer to widen")
    final = net.layers[-1]
    current = final.size
    if target_m_prime < current:
        raise ShapeMismatch(
            f"target size {target_m_prime} is below the current {current}"
        )
    m_pen = net.layers[-2].size
    if not born_admissible(ShapeSpec(m_pen, target_m_prime)):
        raise PaddingInsufficient(
            f"padding to M' = {target_m_prime} still violates the counting "
            f"bound: need M' >= {m_pen - 1}"
        )
    if target_m_prime == current:
        return net
    origin = final.padded_from if final.padded_from is not None else current
    new_final = AlternativeSet(
        id=final.id,
        labels=default_labels(final.id, target_m_prime, padded_from=origin),
        knowability=final.knowability,
        padded_from=origin,
    )
    extra = target_m_prime - current
    last = net.amplitudes.transitions[-1]
    padded = np.hstack([last, np.zeros((m_pen, extra), dtype=complex)])
    transitions = list(net.amplitudes.transitions[:-1]) + [padded]
    return build_context(
        list(net.layers[:-1]) + [new_final],
        net.first_layer,
        transitions,
        rule=net.rule,
        name=net.name,
    )


def sampled_independence_check(
    shape: ShapeSpec,
    rule: ProbabilityRule,
    witness: np.ndarray,
    samples: int = 10_000,
    seed: int = 0,
) -> float:
    """Empirical universal-normalization test of a witness matrix.

    Draws ``samples`` random f-normalized first layers and returns the
    largest deviation of sum_x' f(sum_j c_j c_jx') from 1.  This is the
    for-all form of the requirement the polynomial conditions encode.
    """
    rule = _require_gamma(rule)
    witness = np.asarray(witness, dtype=complex)
    if witness.shape != (shape.m, shape.m_prime):
        raise ShapeMismatch(
            f"witness shape {witness.shape} does not match {(shape.m, shape.m_prime)}"
        )
    g = rule.gamma
    row_norms = (np.abs(witness) ** (2.0 * g)).sum(axis=1)
    if np.max(np.abs(row_norms - 1.0)) > 1e-8:
        raise NormalizationViolation(
            "witness rows must normalize under the rule before the check"
        )
    rng = np.random.default_rng(np.random.SeedSequence([seed, 202]))
    raw = rng.standard_normal((samples, shape.m)) + 1j * rng.standard_normal((samples, shape.m))
    scale = (np.abs(raw) ** (2.0 * g)).sum(axis=1) ** (-1.0 / (2.0 * g))
    first = raw * scale[:, None]
    out = np.abs(first @ witness) ** (2.0 * g)
    return float(np.max(np.abs(out.sum(axis=1) - 1.0)))


def scan_shapes(
    m_values,
    mprime_values,
    gammas,
    restarts: int = 32,
    seed: int = 0,
    samples: int = 64,
) -> list[dict]:
    """Grid of solve() verdicts over shapes and gamma values."""
    rows = []
    for gamma in gammas:
        rule = GammaModulus(float(gamma))
        for m in m_values:
            for mp in mprime_values:
                shape = ShapeSpec(int(m), int(mp))
                system = build_system(shape, rule, samples=samples, seed=seed)
                report = solve(system, restarts=restarts, seed=seed)
                rows.append(
                    {
                        "m": shape.m,
                        "m_prime": shape.m_prime,
                        "gamma": float(gamma),
                        "admissible": born_admissible(shape) if rule.is_born else None,
                        "verdict": report.verdict.value,
                        "best_residual": report.best_residual,
                        "dof_available": None if report.dof is None else report.dof.available,
                        "dof_required": None if report.dof is None else report.dof.required,
                    }
                )
    return rows
