"""Finite-setting Bell nonlocality tools.

Behaviors P(a, b | x, y) for projective spin measurements, the local-polytope
membership test phrased as a critical-visibility LP over deterministic
strategies, the complete two-setting correlation criterion with its analytic
violation thresholds for the noisy family, and a derivative-free search over
measurement settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy.optimize import linprog, minimize

from .linalg import (
    CorrelationData,
    DensityMatrix,
    NumericalFailure,
    correlation_data,
)
from .states import XI_MAX, FamilyParams

MAX_SETTINGS = 6

PROB_TOL = 1e-12
NO_SIGNALING_TOL = 1e-10
LP_TOL = 1e-8
# Relaxed v bound for the settings search objective. Keeps the guidance LP
# bounded on behaviors that stay local at every visibility (white noise
# itself); any value > 1 works, the cap is never reported.
_SEARCH_V_CAP = 4.0

_SIGNS = np.array([1.0, -1.0])


@dataclass(frozen=True)
class SettingsSet:
    """Measurement directions for both parties, one unit vector per setting."""

    vectors_a: np.ndarray
    vectors_b: np.ndarray

    def __post_init__(self) -> None:
        for name, v in (("vectors_a", self.vectors_a), ("vectors_b", self.vectors_b)):
            arr = np.asarray(v, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise ValueError(f"{name} must be an (m, 3) array")
            if not (1 <= arr.shape[0] <= MAX_SETTINGS):
                raise ValueError(f"{name}: settings per side must be 1..{MAX_SETTINGS}")
            norms = np.linalg.norm(arr, axis=1)
            if np.max(np.abs(norms - 1.0)) > 1e-10:
                raise ValueError(f"{name} rows must be unit vectors")
            arr = np.array(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m_a(self) -> int:
        return self.vectors_a.shape[0]

    @property
    def m_b(self) -> int:
        return self.vectors_b.shape[0]

    @classmethod
    def from_flat_angles(cls, flat: np.ndarray, m_a: int, m_b: int) -> "SettingsSet":
        """Build from [theta_A..., phi_A..., theta_B..., phi_B...] (radians)."""
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (2 * (m_a + m_b),):
            raise ValueError("angle vector has the wrong length")
        th_a, ph_a = flat[:m_a], flat[m_a : 2 * m_a]
        th_b, ph_b = flat[2 * m_a : 2 * m_a + m_b], flat[2 * m_a + m_b :]

        def unit(th, ph):
            st = np.sin(th)
            return np.column_stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)])

        return cls(unit(th_a, ph_a), unit(th_b, ph_b))


@dataclass(frozen=True)
class BehaviorTable:
    """Joint outcome distribution P(a, b | x, y), outcomes ordered (+1, -1).

    Construction validates normalization per setting pair (1e-12) and
    no-signaling of both marginals (1e-10).
    """

    probs: np.ndarray
    settings: SettingsSet | None = None

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 4 or p.shape[2:] != (2, 2):
            raise ValueError("probs must have shape (m_a, m_b, 2, 2)")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if p.min() < -PROB_TOL:
            raise ValueError(f"negative probability {p.min()!r}")
        sums = p.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > PROB_TOL:
            raise ValueError("each setting pair must give a normalized distribution")
        marg_a = p.sum(axis=3)
        marg_b = p.sum(axis=2)
        if np.max(np.abs(marg_a - marg_a[:, :1, :])) > NO_SIGNALING_TOL:
            raise ValueError("A's marginal depends on B's setting")
        if np.max(np.abs(marg_b - marg_b[:1, :, :])) > NO_SIGNALING_TOL:
            raise ValueError("B's marginal depends on A's setting")
        p = np.array(p)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def m_a(self) -> int:
        return self.probs.shape[0]

    @property
    def m_b(self) -> int:
        return self.probs.shape[1]

    def correlation_table(self) -> np.ndarray:
        p = self.probs
        return p[:, :, 0, 0] - p[:, :, 0, 1] - p[:, :, 1, 0] + p[:, :, 1, 1]

    def marginals_a(self) -> np.ndarray:
        m = self.probs.sum(axis=3)[:, 0, :]
        return m[:, 0] - m[:, 1]

    def marginals_b(self) -> np.ndarray:
        m = self.probs.sum(axis=2)[0, :, :]
        return m[:, 0] - m[:, 1]


def quantum_behavior(state: "DensityMatrix | CorrelationData", settings: SettingsSet) -> BehaviorTable:
    """Projective-measurement behavior of a two-qubit state.

    Equivalent to Born-rule traces against projector pairs; computed from the
    correlation tensor and local Bloch vectors, which determine every
    projective statistic of a two-qubit state.
    """
    cd = state if isinstance(state, CorrelationData) else correlation_data(state)
    a = settings.vectors_a
    b = settings.vectors_b
    corr = a @ cd.tensor @ b.T
    alpha = a @ cd.local_a
    beta = b @ cd.local_b
    probs = 0.25 * (
        1.0
        + _SIGNS[None, None, :, None] * alpha[:, None, None, None]
        + _SIGNS[None, None, None, :] * beta[None, :, None, None]
        + (_SIGNS[:, None] * _SIGNS[None, :])[None, None, :, :] * corr[:, :, None, None]
    )
    return BehaviorTable(probs=probs, settings=settings)


@lru_cache(maxsize=8)
def _deterministic_tables(m_a: int, m_b: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic-strategy behavior matrix and correlation matrix.

    Returns (M, C): M has shape (4 m_a m_b, 2^(m_a + m_b)) with rows indexed
    by flat (x, y, a, b) and columns by strategy lambda = lambda_A * 2^m_b +
    lambda_B; C has shape (m_a m_b, 2^(m_a + m_b)) with correlation rows.
    Bit x of lambda_A set means that strategy answers -1 on setting x.
    """
    if m_a + m_b > 2 * MAX_SETTINGS:
        raise ValueError("strategy count cap exceeded")
    la = np.arange(2**m_a)
    lb = np.arange(2**m_b)
    sign_a = 1.0 - 2.0 * ((la[:, None] >> np.arange(m_a)[None, :]) & 1)
    sign_b = 1.0 - 2.0 * ((lb[:, None] >> np.arange(m_b)[None, :]) & 1)
    det_a = 0.5 * (1.0 + _SIGNS[None, None, :] * sign_a[:, :, None])
    det_b = 0.5 * (1.0 + _SIGNS[None, None, :] * sign_b[:, :, None])
    m = np.einsum("lxa,kyb->xyablk", det_a, det_b)
    m = m.reshape(4 * m_a * m_b, 2 ** (m_a + m_b))
    c = np.einsum("lx,ky->xylk", sign_a, sign_b).reshape(m_a * m_b, 2 ** (m_a + m_b))
    m.setflags(write=False)
    c.setflags(write=False)
    return m, c


@lru_cache(maxsize=8)
def _guide_strategy_rows(m_a: int, m_b: int) -> np.ndarray:
    """Correlation strategy matrix with the (-a, -b) duplicates dropped.

    Negating both parties' answer vectors leaves every correlator fixed, so
    the columns come in identical pairs and the convex hull is unchanged by
    keeping one representative (lambda_A with its top bit clear). Halves the
    LP the settings search solves per evaluation.
    """
    _, corr = _deterministic_tables(m_a, m_b)
    return corr[:, : corr.shape[1] // 2]


CertificateType = Literal["decomposition", "inequality"]


@dataclass(frozen=True)
class VisibilityResult:
    """Critical white-noise visibility of a behavior plus its certificate.

    `certificate` is JSON-ready: a local decomposition over deterministic
    strategies when v = 1, or a separating inequality (coefficients, local
    bound, quantum value) when v < 1.
    """

    v_critical: float
    m_a: int
    m_b: int
    certificate_type: CertificateType
    certificate: dict
    correlations_only: bool = False
    settings: SettingsSet | None = None

    def to_json_dict(self) -> dict:
        settings = None
        if self.settings is not None:
            settings = {
                "a": [list(map(float, row)) for row in self.settings.vectors_a],
                "b": [list(map(float, row)) for row in self.settings.vectors_b],
            }
        return {
            "vCritical": self.v_critical,
            "mA": self.m_a,
            "mB": self.m_b,
            "settings": settings,
            "certificateType": self.certificate_type,
            "certificate": self.certificate,
            "correlationsOnly": self.correlations_only,
        }


def _solve_lp(c, a_eq, b_eq, bounds, a_ub=None, b_ub=None, presolve=True):
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs",
                  options={"presolve": presolve})
    if res.status != 0 or res.x is None:
        raise NumericalFailure(f"LP solver failed: {res.message}")
    return res


def _visibility_optimum(
    rows: np.ndarray,
    target: np.ndarray,
    rhs_noise: np.ndarray,
    v_cap: float,
    presolve: bool = True,
) -> tuple[float, np.ndarray]:
    """Solve max v s.t. sum_l q_l P_l = v target + (1 - v) noise, q in simplex."""
    n_strategies = rows.shape[1]
    a_eq = np.hstack([rows, -(target - rhs_noise)[:, None]])
    a_eq = np.vstack([a_eq, np.append(np.ones(n_strategies), 0.0)])
    b_eq = np.append(rhs_noise, 1.0)
    c = np.zeros(n_strategies + 1)
    c[-1] = -1.0
    bounds = [(0.0, None)] * n_strategies + [(0.0, v_cap)]
    res = _solve_lp(c, a_eq, b_eq, bounds, presolve=presolve)
    return float(res.x[-1]), res.x[:n_strategies]


def critical_visibility(table: BehaviorTable, correlations_only: bool = False) -> VisibilityResult:
    """Largest v such that v P + (1 - v) P_white admits a local model.

    Solved exactly as an LP over all deterministic strategies. With
    `correlations_only` the membership constraints cover only the m_a * m_b
    correlators (the white-noise point has vanishing correlators), which is
    the domain on which the separable mimic operates.
    """
    m_full, m_corr = _deterministic_tables(table.m_a, table.m_b)
    if correlations_only:
        target = table.correlation_table().ravel()
        rows = m_corr
        rhs_noise = np.zeros(rows.shape[0])
    else:
        target = table.probs.ravel()
        rows = m_full
        rhs_noise = np.full(rows.shape[0], 0.25)
    v, weights = _visibility_optimum(rows, target, rhs_noise, v_cap=1.0)

    if v >= 1.0 - 1e-9:
        certificate = {
            "weights": [[int(i), float(w)] for i, w in enumerate(weights) if w > 1e-12],
        }
        kind: CertificateType = "decomposition"
    else:
        coeffs, local_bound, quantum_value = _separating_inequality(rows, target)
        if quantum_value - local_bound <= 0.0:
            raise NumericalFailure("behavior outside the polytope but no separating inequality found")
        certificate = {
            "coefficients": [float(x) for x in coeffs],
            "localBound": float(local_bound),
            "quantumValue": float(quantum_value),
        }
        kind = "inequality"
    return VisibilityResult(
        v_critical=v,
        m_a=table.m_a,
        m_b=table.m_b,
        certificate_type=kind,
        certificate=certificate,
        correlations_only=correlations_only,
        settings=table.settings,
    )


def _separating_inequality(rows: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Best inequality separating `target` from the local polytope.

    Maximizes B . target - L subject to B . P_lambda <= L for every
    deterministic strategy and box-normalized coefficients.
    """
    n_rows, n_strategies = rows.shape
    c = np.append(-target, 1.0)
    a_ub = np.hstack([rows.T, -np.ones((n_strategies, 1))])
    b_ub = np.zeros(n_strategies)
    bounds = [(-1.0, 1.0)] * n_rows + [(None, None)]
    res = _solve_lp(c, a_eq=None, b_eq=None, bounds=bounds, a_ub=a_ub, b_ub=b_ub)
    coeffs = res.x[:-1]
    local_bound = float(np.max(coeffs @ rows))
    quantum_value = float(coeffs @ target)
    return coeffs, local_bound, quantum_value


def audit_certificate(result: VisibilityResult, table: BehaviorTable) -> bool:
    """Re-verify a visibility certificate from its serialized content alone."""
    m_full, m_corr = _deterministic_tables(table.m_a, table.m_b)
    if result.correlations_only:
        target = table.correlation_table().ravel()
        rows = m_corr
        noise = np.zeros(rows.shape[0])
    else:
        target = table.probs.ravel()
        rows = m_full
        noise = np.full(rows.shape[0], 0.25)
    if result.certificate_type == "decomposition":
        items = result.certificate["weights"]
        idx = np.array([i for i, _ in items], dtype=int)
        w = np.array([x for _, x in items])
        if w.size == 0 or w.min() < -PROB_TOL or abs(w.sum() - 1.0) > LP_TOL:
            return False
        mixed = rows[:, idx] @ w
        scaled = result.v_critical * target + (1.0 - result.v_critical) * noise
        return bool(np.max(np.abs(mixed - scaled)) <= LP_TOL)
    coeffs = np.asarray(result.certificate["coefficients"])
    if coeffs.shape != (rows.shape[0],):
        return False
    local_bound = float(np.max(coeffs @ rows))
    quantum_value = float(coeffs @ target)
    return bool(quantum_value - local_bound > LP_TOL)


def chsh_value(table: BehaviorTable) -> float:
    """E(1,1) + E(1,2) + E(2,1) - E(2,2) for a two-setting behavior."""
    if table.m_a != 2 or table.m_b != 2:
        raise ValueError("CHSH needs exactly two settings per side")
    e = table.correlation_table()
    return float(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1])


@dataclass(frozen=True)
class TwoSettingResult:
    value: float
    violates: bool


def two_setting_criterion(tensor: "np.ndarray | CorrelationData") -> TwoSettingResult:
    """Complete criterion for two-setting correlation inequalities.

    Some pair of settings per side violates a correlation Bell inequality
    iff the two largest squared singular values of the correlation tensor
    sum above 1.
    """
    t = tensor.tensor if isinstance(tensor, CorrelationData) else np.asarray(tensor, dtype=float)
    if t.shape != (3, 3):
        raise ValueError("expected a 3x3 correlation tensor")
    s = np.linalg.svd(t, compute_uv=False)
    value = float(s[0] ** 2 + s[1] ** 2)
    return TwoSettingResult(value=value, violates=value > 1.0 + 1e-12)


Branch = Literal["two-equatorial", "equatorial-plus-zz"]


@dataclass(frozen=True)
class ViolationThreshold:
    p_star: float
    branch: Branch


def violation_threshold(xi: float) -> ViolationThreshold:
    """Smallest entangled weight above which two settings per side violate.

    The two candidate branches come from picking either both dominant
    correlators in the equatorial plane, p > 1 / (sqrt(2) sin 2 xi), or one
    equatorial and the zz correlator, p > 4 / (4 + sin^2 2 xi); the
    threshold is their minimum. Violation requires p strictly above the
    returned value, so p_star = 1 (the xi = 0 limit) means no admissible
    weight violates.
    """
    params = FamilyParams(0.0, xi)
    s = params.sin_2xi
    mixed = 4.0 / (4.0 + s * s)
    if s == 0.0:
        return ViolationThreshold(p_star=mixed, branch="equatorial-plus-zz")
    # branch comparison cross-multiplied: 1/(sqrt(2) s) <= 4/(4 + s^2) avoids
    # the overflowing division at subnormal s
    if 4.0 + s * s <= 4.0 * np.sqrt(2.0) * s:
        return ViolationThreshold(p_star=float(1.0 / (np.sqrt(2.0) * s)), branch="two-equatorial")
    return ViolationThreshold(p_star=float(mixed), branch="equatorial-plus-zz")


def threshold_branch_crossings() -> tuple[float, float]:
    """Angles where the two threshold branches coincide.

    Solving 1 / (sqrt(2) s) = 4 / (4 + s^2) gives s = 2 sqrt(2) - 2; the two
    crossing angles on (0, pi/2) are asin(s)/2 and (pi - asin(s))/2. The
    family chart covers xi <= pi/4 only; the second crossing belongs to the
    mirror-image states and is reported for completeness of the threshold
    formula, which depends on xi through sin(2 xi) alone.
    """
    s = 2.0 * np.sqrt(2.0) - 2.0
    half = float(np.arcsin(s))
    return half / 2.0, (np.pi - half) / 2.0


@dataclass(frozen=True)
class SettingsSearch:
    """Best settings found by the derivative-free search."""

    v_min: float
    settings: SettingsSet
    visibility: VisibilityResult
    restarts: int
    seed: int


def optimize_settings(
    state: "DensityMatrix | CorrelationData",
    m_a: int,
    m_b: int | None = None,
    restarts: int = 20,
    seed: int = 0,
    max_iterations: int = 500,
) -> SettingsSearch:
    """Minimize critical visibility over measurement directions.

    Nelder-Mead over the 2 (m_a + m_b) polar angles, restarted from
    uniformly random directions with per-restart sub-seeds. The reported
    visibility caps v at 1, which is flat across the whole local region and
    gives the simplex nothing to descend, so the search instead follows the
    uncapped correlations-only robustness (the membership LP over
    correlators with the v <= 1 bound relaxed). Two reasons to guide on
    correlators rather than full behaviors: the correlator landscape has
    slope everywhere below the |E| = 1 cube faces, while full-behavior
    extrapolation is pinned to exactly 1 wherever the table has a zero entry
    (rank-deficient states produce those on whole submanifolds of settings,
    which act as false attractors); and the LP is a quarter the size. The
    result reported at the best settings is always the capped full-behavior
    visibility. Restarts whose entire initial simplex sits at the relaxed
    cap (near-vanishing correlators) stop immediately: that plateau is
    exactly flat and the simplex cannot leave its own hull.
    """
    if m_b is None:
        m_b = m_a
    if not (1 <= m_a <= MAX_SETTINGS and 1 <= m_b <= MAX_SETTINGS):
        raise ValueError(f"settings per side must be 1..{MAX_SETTINGS}")
    if restarts < 1:
        raise ValueError("need at least one restart")
    cd = state if isinstance(state, CorrelationData) else correlation_data(state)
    n = 2 * (m_a + m_b)
    corr_rows = _guide_strategy_rows(m_a, m_b)
    rhs_zero = np.zeros(corr_rows.shape[0])

    def objective(flat: np.ndarray) -> float:
        settings = SettingsSet.from_flat_angles(flat, m_a, m_b)
        corr = settings.vectors_a @ cd.tensor @ settings.vectors_b.T
        # presolve off: these LPs are tiny and the search solves thousands
        v, _ = _visibility_optimum(corr_rows, corr.ravel(), rhs_zero, v_cap=_SEARCH_V_CAP, presolve=False)
        return v

    best_v = np.inf
    best_angles: np.ndarray | None = None
    children = np.random.SeedSequence(seed).spawn(restarts)
    for child in children:
        rng = np.random.default_rng(child)
        theta = np.arccos(2.0 * rng.random(m_a + m_b) - 1.0)
        phi = 2.0 * np.pi * rng.random(m_a + m_b)
        x0 = np.concatenate([theta[:m_a], phi[:m_a], theta[m_a:], phi[m_a:]])
        simplex = np.vstack([x0, x0 + 0.25 * np.eye(n)])
        values = np.array([objective(x) for x in simplex])
        if np.all(values >= _SEARCH_V_CAP - 1e-9):
            if values[0] < best_v:
                best_v = float(values[0])
                best_angles = x0
            continue
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": max_iterations,
                "fatol": 1e-7,
                "xatol": 1e-4,
                "initial_simplex": simplex,
            },
        )
        if res.fun < best_v:
            best_v = float(res.fun)
            best_angles = np.asarray(res.x)
    assert best_angles is not None
    settings = SettingsSet.from_flat_angles(best_angles, m_a, m_b)
    visibility = critical_visibility(quantum_behavior(cd, settings))
    return SettingsSearch(
        v_min=visibility.v_critical,
        settings=settings,
        visibility=visibility,
        restarts=restarts,
        seed=int(seed),
    )
