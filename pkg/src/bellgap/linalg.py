"""Dense linear algebra for small quantum systems.

Conventions: qubit 1 is the leftmost tensor factor, the computational
basis vector |0> comes first in every factor, and sigma_z |0> = +|0>.
All value types are immutable; the wrapped numpy arrays are write-locked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

TOL = 1e-10

Party = Literal["A", "B"]


class ValidityError(ValueError):
    """A documented precondition was violated (refusal, not a bug)."""


class NumericalFailure(RuntimeError):
    """A numerical routine did not converge or reported failure."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr)
    out.setflags(write=False)
    return out


PAULI_X = _frozen(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _frozen(np.array([[1, 0], [0, -1]], dtype=complex))
IDENTITY_2 = _frozen(np.eye(2, dtype=complex))
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class BlochVector:
    """Unit vector on the Bloch sphere, components in the (x, y, z) basis."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for c in (self.x, self.y, self.z):
            if not np.isfinite(c):
                raise ValueError("Bloch components must be finite")
        norm = np.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"Bloch vector must be unit length, got |n| = {norm!r}")

    @classmethod
    def from_array(cls, v: Iterable[float]) -> "BlochVector":
        a = np.asarray(list(v), dtype=float)
        if a.shape != (3,):
            raise ValueError("expected exactly three components")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


X_HAT = BlochVector(1.0, 0.0, 0.0)
Y_HAT = BlochVector(0.0, 1.0, 0.0)
Z_HAT = BlochVector(0.0, 0.0, 1.0)


def _as_direction(n: "BlochVector | Iterable[float]") -> np.ndarray:
    if isinstance(n, BlochVector):
        return n.array
    return BlochVector.from_array(n).array


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of a finite-dimensional system."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if a.size < 2:
            raise ValueError("state needs dimension >= 2")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"state not normalized, |psi| = {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_qubits(self) -> int:
        n = self.dim.bit_length() - 1
        if 2**n != self.dim:
            raise ValueError(f"dimension {self.dim} is not a power of two")
        return n

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix.

    Validation happens on construction: Hermiticity and trace within 1e-10,
    smallest eigenvalue above -1e-10. Use plain ndarrays for intermediate
    objects that legitimately leave the state space (partial transposes).
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > TOL:
            raise ValueError("density matrix must be Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL:
            raise ValueError(f"density matrix must have unit trace, got {tr!r}")
        low = float(np.linalg.eigvalsh(m)[0])
        if low < -TOL:
            raise ValueError(f"density matrix not positive semidefinite, min eig {low!r}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return cls(psi.projector())

    @classmethod
    def mixture(cls, pairs: Iterable[tuple[float, "DensityMatrix | np.ndarray"]]) -> "DensityMatrix":
        """Convex mixture sum_i w_i rho_i; weights must be a distribution."""
        terms = [(float(w), rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)) for w, rho in pairs]
        if not terms:
            raise ValueError("mixture needs at least one component")
        weights = np.array([w for w, _ in terms])
        if np.any(weights < -TOL):
            raise ValueError("mixture weights must be nonnegative")
        if abs(weights.sum() - 1.0) > TOL:
            raise ValueError("mixture weights must sum to one")
        acc = sum(w * m for w, m in terms)
        return cls(acc)


@dataclass(frozen=True)
class CorrelationData:
    """Correlation tensor T_ij = Tr[rho sigma_i x sigma_j] plus both local Bloch vectors."""

    tensor: np.ndarray
    local_a: np.ndarray
    local_b: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.tensor, dtype=float)
        la = np.asarray(self.local_a, dtype=float)
        lb = np.asarray(self.local_b, dtype=float)
        if t.shape != (3, 3) or la.shape != (3,) or lb.shape != (3,):
            raise ValueError("expected a 3x3 tensor and two 3-vectors")
        object.__setattr__(self, "tensor", _frozen(t))
        object.__setattr__(self, "local_a", _frozen(la))
        object.__setattr__(self, "local_b", _frozen(lb))

    def correlation(self, a: "BlochVector | Iterable[float]", b: "BlochVector | Iterable[float]") -> float:
        return float(_as_direction(a) @ self.tensor @ _as_direction(b))


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor as subsystem A."""
    return np.kron(np.asarray(a), np.asarray(b))


def _square_blocks(m: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    d_a, d_b = dims
    if m.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    return m.reshape(d_a, d_b, d_a, d_b)


def partial_transpose(rho: "DensityMatrix | np.ndarray", dims: tuple[int, int] = (2, 2), party: Party = "B") -> np.ndarray:
    """Transpose one tensor factor.

    Returns a plain ndarray: the result is Hermitian but in general not
    positive, which is the whole point of computing it.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    blocks = _square_blocks(m, dims)
    if party == "B":
        swapped = blocks.transpose(0, 3, 2, 1)
    elif party == "A":
        swapped = blocks.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    d = dims[0] * dims[1]
    return swapped.reshape(d, d)


def partial_trace(rho: "DensityMatrix | np.ndarray", dims: tuple[int, int] = (2, 2), keep: Party = "A") -> DensityMatrix:
    """Trace out the complementary subsystem, keeping `keep`."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    blocks = _square_blocks(m, dims)
    if keep == "A":
        reduced = np.einsum("ijkj->ik", blocks)
    elif keep == "B":
        reduced = np.einsum("ijil->jl", blocks)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(reduced)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(a - a.conj().T)) > TOL:
        raise ValueError("matrix is not Hermitian within 1e-10")
    return np.linalg.eigvalsh(a)


def pauli_observable(n: "BlochVector | Iterable[float]") -> np.ndarray:
    """Spin observable n . sigma for a measurement direction n."""
    v = _as_direction(n)
    return v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z


def correlation(rho: DensityMatrix, a: "BlochVector | Iterable[float]", b: "BlochVector | Iterable[float]") -> float:
    """Joint expectation Tr[rho (a.sigma x b.sigma)] for a two-qubit state."""
    if rho.dim != 4:
        raise ValueError("correlation is defined for two qubits")
    obs = tensor_product(pauli_observable(a), pauli_observable(b))
    val = np.trace(rho.matrix @ obs)
    if abs(val.imag) > TOL:
        raise NumericalFailure(f"correlation came out non-real: {val!r}")
    return float(val.real)


def local_expectation(rho: DensityMatrix, n: "BlochVector | Iterable[float]", party: Party = "A") -> float:
    """Single-party expectation Tr[rho (n.sigma x 1)] or Tr[rho (1 x n.sigma)]."""
    if rho.dim != 4:
        raise ValueError("local_expectation is defined for two qubits")
    obs = pauli_observable(n)
    if party == "A":
        full = tensor_product(obs, IDENTITY_2)
    elif party == "B":
        full = tensor_product(IDENTITY_2, obs)
    else:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    val = np.trace(rho.matrix @ full)
    if abs(val.imag) > TOL:
        raise NumericalFailure(f"local expectation came out non-real: {val!r}")
    return float(val.real)


def correlation_data(rho: DensityMatrix) -> CorrelationData:
    """Extract (T, local_a, local_b); these determine every projective statistic."""
    if rho.dim != 4:
        raise ValueError("correlation_data is defined for two qubits")
    t = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            t[i, j] = np.trace(rho.matrix @ tensor_product(si, sj)).real
    la = np.array([np.trace(rho.matrix @ tensor_product(s, IDENTITY_2)).real for s in PAULIS])
    lb = np.array([np.trace(rho.matrix @ tensor_product(IDENTITY_2, s)).real for s in PAULIS])
    return CorrelationData(t, la, lb)
