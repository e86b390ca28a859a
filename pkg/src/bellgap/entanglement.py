"""Entanglement detection: PPT tests, product-form checks, and the
dichotomy for superpositions of a reference product state with a tilted
product state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .linalg import (
    DensityMatrix,
    NumericalFailure,
    PureState,
    ValidityError,
    hermitian_eigenvalues,
    partial_transpose,
)
from .states import FamilyParams, werner_state

WITNESS_TOL = 1e-10
PURITY_TOL = 1e-10
ZERO_TOL = 1e-12

MAX_QUBITS = 6


@dataclass(frozen=True)
class PptVerdict:
    """Outcome of a partial-transpose test.

    `entangled` is set when the witness fires (min eigenvalue below -1e-10).
    `conclusive` marks the cases where a silent witness also proves
    separability, i.e. total dimension at most 6.
    """

    entangled: bool
    min_eigenvalue: float
    conclusive: bool


def ppt_verdict(rho: DensityMatrix, dims: tuple[int, int] = (2, 2)) -> PptVerdict:
    pt = partial_transpose(rho, dims=dims, party="B")
    low = float(hermitian_eigenvalues(pt)[0])
    fired = low < -WITNESS_TOL
    return PptVerdict(entangled=fired, min_eigenvalue=low, conclusive=fired or dims[0] * dims[1] <= 6)


def family_pt_min_eigenvalue(p: float, xi: float) -> float:
    """Smallest partial-transpose eigenvalue of the noisy family state.

    The partial transpose is block diagonal: two pure diagonal entries
    p cos^2(xi) and p sin^2(xi), and one 2x2 block mixing |00> with |11>
    whose lower eigenvalue is ((1-p) - sqrt((1-p)^2 + p^2 sin^2(2 xi)))/2.
    That block eigenvalue is always the minimum and is negative exactly when
    p sin(2 xi) != 0.
    """
    params = FamilyParams(p, xi)
    off = params.p * params.sin_2xi
    keep = 1.0 - params.p
    return float((keep - np.hypot(keep, off)) / 2.0)


def family_entangled(p: float, xi: float) -> bool:
    """Analytic classification: entangled precisely when p > 0 and xi > 0.

    Follows from the admixture dichotomy (see admixture_entangled); the PPT
    witness agrees wherever it has numerical resolution.
    """
    params = FamilyParams(p, xi)
    return params.p > 0.0 and params.xi > 0.0


def _qubit_tensor(psi: PureState) -> np.ndarray:
    n = psi.n_qubits
    if not (2 <= n <= MAX_QUBITS):
        raise ValueError(f"supported qubit counts are 2..{MAX_QUBITS}, got {n}")
    return psi.amplitudes.reshape((2,) * n)


def _single_qubit_reduction(tensor: np.ndarray, qubit: int) -> np.ndarray:
    a = np.moveaxis(tensor, qubit, 0).reshape(2, -1)
    return a @ a.conj().T


@dataclass(frozen=True)
class ProductDecomposition:
    """Result of a full product-form check on a pure multi-qubit state.

    When `is_product`, `factors` holds one normalized single-qubit ket per
    site (phase-fixed so the dominant amplitude is real positive) and
    `fidelity` is the squared overlap between their tensor product and the
    input, which the check requires to be at least 1 - 1e-10.
    """

    is_product: bool
    factors: tuple[np.ndarray, ...] | None = None
    fidelity: float | None = None

    @property
    def tilt_coefficients(self) -> tuple[complex, ...]:
        """Per-site ratio c1/c0 in the |0> + k|1> parameterization.

        Sites whose |0> amplitude vanishes get complex infinity; the
        parameterization does not cover them.
        """
        if not self.is_product or self.factors is None:
            raise ValueError("state is not a product, no coefficients to report")
        out = []
        for f in self.factors:
            if abs(f[0]) <= ZERO_TOL:
                out.append(complex(np.inf))
            else:
                out.append(complex(f[1] / f[0]))
        return tuple(out)


def is_product_pure(psi: PureState) -> ProductDecomposition:
    """Decide whether a pure state factorizes over every qubit.

    A pure state is a full product iff each single-qubit reduced state is
    pure (largest eigenvalue 1 within 1e-10). Factors are the principal
    eigenvectors; the reconstruction is verified by fidelity.
    """
    tensor = _qubit_tensor(psi)
    n = tensor.ndim
    factors = []
    for j in range(n):
        red = _single_qubit_reduction(tensor, j)
        vals, vecs = np.linalg.eigh(red)
        if vals[-1] < 1.0 - PURITY_TOL:
            return ProductDecomposition(is_product=False)
        vec = vecs[:, -1]
        lead = np.argmax(np.abs(vec))
        vec = vec * (vec[lead].conj() / abs(vec[lead]))
        factors.append(vec)
    rebuilt = reduce(np.kron, factors)
    fid = float(abs(np.vdot(rebuilt, psi.amplitudes)) ** 2)
    if fid < 1.0 - PURITY_TOL:
        raise NumericalFailure(f"pure reductions but reconstruction fidelity {fid!r}")
    return ProductDecomposition(is_product=True, factors=tuple(_frozen_vec(f) for f in factors), fidelity=fid)


def _frozen_vec(v: np.ndarray) -> np.ndarray:
    out = np.array(v)
    out.setflags(write=False)
    return out


class SuperpositionClass(enum.Enum):
    PRODUCT_FOR_ALL = "product-for-all"
    ENTANGLED_FOR_ALL = "entangled-for-all"
    TRIVIAL = "trivial"


def tilted_product_ket(k) -> PureState:
    """Normalized product state prod_j (|0> + k_j |1>)."""
    ks = np.asarray(k, dtype=complex).ravel()
    if not (2 <= ks.size <= MAX_QUBITS):
        raise ValueError(f"supported qubit counts are 2..{MAX_QUBITS}, got {ks.size}")
    factors = [np.array([1.0, kj], dtype=complex) / np.sqrt(1.0 + abs(kj) ** 2) for kj in ks]
    return PureState(reduce(np.kron, factors))


def superposition_ket(alpha: complex, beta: complex, k) -> PureState:
    """Explicit normalized superposition alpha |0...0> + beta |tilted product>."""
    tilted = tilted_product_ket(k)
    v = beta * np.array(tilted.amplitudes)
    v[0] += alpha
    norm = np.linalg.norm(v)
    if norm <= 1e-8:
        raise ValueError("superposition is not normalizable (components cancel)")
    return PureState(v / norm)


def superposition_class(alpha: complex, beta: complex, k, tol: float = ZERO_TOL) -> SuperpositionClass:
    """Classify alpha |0...0> + beta |tilted product> without building it.

    At most one nonzero tilt coefficient makes the superposition a product
    for every choice of alpha and beta. With two or more nonzero tilts the
    state is entangled for every non-degenerate superposition; degenerate
    coefficients (either one vanishing, so the state collapses to a single
    branch) are reported as TRIVIAL.
    """
    ks = np.asarray(k, dtype=complex).ravel()
    if ks.size < 2:
        raise ValueError("need at least two sites")
    nonzero = int(np.count_nonzero(np.abs(ks) > tol))
    if nonzero <= 1:
        return SuperpositionClass.PRODUCT_FOR_ALL
    if abs(alpha) <= tol or abs(beta) <= tol:
        return SuperpositionClass.TRIVIAL
    return SuperpositionClass.ENTANGLED_FOR_ALL


def admixture_pt_witnesses(epsilon: float, psi_ent: PureState) -> np.ndarray:
    """Minimum partial-transpose eigenvalue across each 1-vs-rest cut."""
    n = psi_ent.n_qubits
    rho = epsilon * psi_ent.projector()
    rho.flat[0] += 1.0 - epsilon
    tensor_dims = (2,) * n
    out = np.empty(n)
    for j in range(n):
        perm = (j,) + tuple(i for i in range(n) if i != j)
        full = rho.reshape(tensor_dims + tensor_dims)
        moved = full.transpose(tuple(perm) + tuple(p + n for p in perm))
        flat = moved.reshape(2 ** n, 2 ** n)
        pt = partial_transpose(flat, dims=(2, 2 ** (n - 1)), party="A")
        out[j] = hermitian_eigenvalues(pt)[0]
    return out


def admixture_entangled(epsilon: float, psi_ent: PureState) -> bool:
    """Entanglement verdict for epsilon |psi><psi| + (1 - epsilon) |0...0><0...0|.

    Requires an entangled |psi_ent>. Any separable decomposition of the
    mixture would have to live on the two-dimensional support spanned by
    |0...0> and |psi_ent>, and that plane contains at most one product state
    other than |0...0> (the superposition dichotomy), which cannot carry the
    |psi_ent> component. Hence the mixture is entangled for every
    epsilon > 0. Partial-transpose witnesses are computed as a redundant
    numerical cross-check where they have resolution.
    """
    if not np.isfinite(epsilon) or not (0.0 <= epsilon <= 1.0):
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    if is_product_pure(psi_ent).is_product:
        raise ValidityError("psi_ent is a product state; the mixture argument needs entanglement")
    verdict = epsilon > 0.0
    witnesses = admixture_pt_witnesses(epsilon, psi_ent)
    if not verdict and witnesses.min() < -WITNESS_TOL:
        raise NumericalFailure(
            f"epsilon = 0 must give a product mixture, witness found {witnesses.min()!r}"
        )
    return verdict


def werner_entanglement_boundary(d: int = 2, tol: float = 1e-9) -> float:
    """Locate the sign change of the Werner partial-transpose witness by bisection.

    Only d = 2 is supported: there PPT is conclusive, so the sign change is
    the exact entanglement boundary (p = 1/3).
    """
    if d != 2:
        raise ValueError("the bisection boundary is only conclusive for d = 2")
    if not (0.0 < tol < 1e-2):
        raise ValueError("tol must be a small positive width")

    def witness(p: float) -> float:
        pt = partial_transpose(werner_state(2, p), dims=(2, 2), party="B")
        return float(hermitian_eigenvalues(pt)[0])

    lo, hi = 0.0, 1.0
    if not (witness(lo) > 0.0 > witness(hi)):
        raise NumericalFailure("witness does not change sign on [0, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if witness(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
