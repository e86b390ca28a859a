"""State constructors: the noisy two-qubit family and reference Werner states.

The family of interest mixes a partially entangled pure state
cos(xi)|01> - sin(xi)|10> with the aligned product state |00>. The angle xi
runs over [0, pi/4]; xi = pi/4 gives the singlet, p is the entangled weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, PureState, _as_direction, local_expectation

XI_MAX = np.pi / 4

WERNER_DIMS = (2, 3, 4)


@dataclass(frozen=True)
class FamilyParams:
    """Point (p, xi) in the family's parameter rectangle [0,1] x [0, pi/4]."""

    p: float
    xi: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.p) or not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        if not np.isfinite(self.xi) or not (0.0 <= self.xi <= XI_MAX + 1e-12):
            raise ValueError(f"xi must lie in [0, pi/4], got {self.xi!r}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "xi", float(self.xi))

    @property
    def sin_2xi(self) -> float:
        return float(np.sin(2.0 * self.xi))


@dataclass(frozen=True)
class WernerParams:
    """Werner mixing weight p for local dimension d (2, 3 or 4 supported)."""

    d: int
    p: float

    def __post_init__(self) -> None:
        if self.d not in WERNER_DIMS:
            raise ValueError(f"d must be one of {WERNER_DIMS}, got {self.d!r}")
        if not np.isfinite(self.p) or not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")


def entangled_ket(xi: float) -> PureState:
    """The tilted entangled state cos(xi)|01> - sin(xi)|10>."""
    FamilyParams(0.0, xi)
    return PureState(np.array([0.0, np.cos(xi), -np.sin(xi), 0.0], dtype=complex))


def singlet() -> PureState:
    return entangled_ket(XI_MAX)


def aligned_product_ket() -> PureState:
    """The noise component |00> (both spins up along z)."""
    return PureState(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))


def family_state(p: float, xi: float) -> DensityMatrix:
    """Rank-<=2 mixture p |psi_xi><psi_xi| + (1 - p) |00><00|."""
    params = FamilyParams(p, xi)
    ent = entangled_ket(xi).projector()
    noise = aligned_product_ket().projector()
    return DensityMatrix(params.p * ent + (1.0 - params.p) * noise)


def family_correlation(p: float, xi: float, a, b) -> float:
    """Closed-form joint expectation for the family state.

    E(a, b) = -p sin(2 xi) (a_x b_x + a_y b_y) + (1 - 2p) a_z b_z. Exact for
    every (p, xi); the correlation tensor is diag(-p s, -p s, 1 - 2p) with
    s = sin(2 xi).
    """
    params = FamilyParams(p, xi)
    av, bv = _as_direction(a), _as_direction(b)
    s = params.sin_2xi
    return float(-p * s * (av[0] * bv[0] + av[1] * bv[1]) + (1.0 - 2.0 * p) * av[2] * bv[2])


def family_local_expectation(p: float, xi: float, n, party="A") -> float:
    """Single-party expectation for the family state.

    At xi = pi/4 this is the closed form E(n) = (1 - p) n_z. No closed form
    is asserted for other xi; there the value is computed from the density
    matrix via linalg.local_expectation.
    """
    params = FamilyParams(p, xi)
    if party not in ("A", "B"):
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    if params.xi == XI_MAX:
        return float((1.0 - params.p) * _as_direction(n)[2])
    return local_expectation(family_state(params.p, params.xi), n, party)


def werner_state(d: int, p: float) -> DensityMatrix:
    """Werner state: p times the uniform antisymmetric mixture plus white noise.

    The entangled part averages the d(d-1)/2 singlet-like states
    (|kl> - |lk>)/sqrt(2) over all index pairs k < l.
    """
    params = WernerParams(d, p)
    dim = d * d
    ent = np.zeros((dim, dim), dtype=complex)
    for k in range(d):
        for l in range(k + 1, d):
            v = np.zeros(dim, dtype=complex)
            v[k * d + l] = 1.0 / np.sqrt(2.0)
            v[l * d + k] = -1.0 / np.sqrt(2.0)
            ent += np.outer(v, v.conj())
    ent *= 2.0 / (d * (d - 1))
    return DensityMatrix(params.p * ent + (1.0 - params.p) * np.eye(dim) / dim)


def werner_thresholds(d: int) -> tuple[float, float]:
    """(entanglement threshold, projective-LHV threshold) = (1/(d+1), 1 - 1/d)."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    return 1.0 / (d + 1), 1.0 - 1.0 / d
