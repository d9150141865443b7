"""Information measures: entropies, fidelities, Holevo quantity, continuity bounds.

All logarithms are base 2, so entropies and rates come out in bits (qubits per
signal).  The convention 0*log(0) = 0 is implemented by zeroing eigenvalues
below 1e-15 before taking logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidPovm,
    LengthMismatch,
    ProbabilityMismatch,
    ValidationError,
)
from .qmat import (
    DensityLike,
    DensityOperator,
    as_density,
    dagger,
    eig_hermitian,
    matrix_sqrt_psd,
)

PROB_TOL = 1e-10
POVM_TOL = 1e-8
_LOG_FLOOR = 1e-15

#: Average-fidelity threshold above which the Holevo continuity bound applies.
CONTINUITY_THRESHOLD = float(np.sqrt(35.0 / 36.0))
#: Coefficient of the Holevo continuity bound.
CONTINUITY_COEFF = 2.0 + 2.0 * np.sqrt(2.0)


def as_prob_vector(p, name: str = "probability vector") -> np.ndarray:
    """Validate nonnegativity and unit sum (within 1e-10); returns a float array."""
    a = np.asarray(p, dtype=float).reshape(-1)
    if a.size == 0:
        raise ValidationError(f"{name}: must be non-empty")
    if np.min(a) < -PROB_TOL:
        raise ValidationError(f"{name}: entry {np.min(a):.3e} is negative")
    s = float(np.sum(a))
    if abs(s - 1.0) > PROB_TOL:
        raise ValidationError(f"{name}: |sum - 1| = {abs(s - 1.0):.3e} exceeds {PROB_TOL}")
    return np.clip(a, 0.0, None)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted list of same-dimension density operators."""

    states: tuple[DensityOperator, ...]
    probs: np.ndarray

    @classmethod
    def from_lists(cls, probs, states: Sequence[DensityLike]) -> "Ensemble":
        p = as_prob_vector(probs, "ensemble probabilities")
        rhos = tuple(as_density(s, f"ensemble state {i}") for i, s in enumerate(states))
        if len(rhos) != p.size:
            raise LengthMismatch(
                f"ensemble has {len(rhos)} states but {p.size} probabilities"
            )
        dims = {r.dim for r in rhos}
        if len(dims) > 1:
            raise DimensionMismatch(f"ensemble states have mixed dimensions {sorted(dims)}")
        p.setflags(write=False)
        return cls(rhos, p)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    def average(self) -> DensityOperator:
        """The mean state sum_i p_i rho_i (valid by convexity)."""
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for p, rho in zip(self.probs, self.states):
            acc += p * rho.matrix
        acc = (acc + dagger(acc)) / 2.0
        return DensityOperator._wrap(acc)


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive-operator-valued measure: PSD elements resolving the identity."""

    elements: tuple[np.ndarray, ...]

    @classmethod
    def from_elements(cls, elements: Sequence) -> "Povm":
        if not len(elements):
            raise InvalidPovm("POVM must have at least one element")
        mats = []
        dim = None
        for i, e in enumerate(elements):
            a = np.asarray(e, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise InvalidPovm(f"POVM element {i} is not a square matrix")
            if dim is None:
                dim = a.shape[0]
            elif a.shape[0] != dim:
                raise InvalidPovm(f"POVM element {i} has dimension {a.shape[0]}, expected {dim}")
            if np.max(np.abs(a - dagger(a))) > POVM_TOL:
                raise InvalidPovm(f"POVM element {i} is not Hermitian within {POVM_TOL}")
            a = (a + dagger(a)) / 2.0
            lo = float(np.min(np.linalg.eigvalsh(a)))
            if lo < -POVM_TOL:
                raise InvalidPovm(f"POVM element {i} has negative eigenvalue {lo:.3e}")
            a.setflags(write=False)
            mats.append(a)
        total = sum(mats)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > POVM_TOL:
            raise InvalidPovm(
                f"POVM elements do not sum to identity: max deviation {defect:.3e} > {POVM_TOL}"
            )
        return cls(tuple(mats))

    @property
    def dim(self) -> int:
        return int(self.elements[0].shape[0])

    def outcome_probs(self, rho: DensityLike) -> np.ndarray:
        r = as_density(rho)
        if r.dim != self.dim:
            raise DimensionMismatch(
                f"state dimension {r.dim} does not match POVM dimension {self.dim}"
            )
        p = np.array([float(np.real(np.trace(r.matrix @ e))) for e in self.elements])
        p = np.clip(p, 0.0, None)
        s = p.sum()
        return p / s if s > 0 else p


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i log2 p_i in bits."""
    a = as_prob_vector(p, "shannon_entropy argument")
    nz = a[a > _LOG_FLOOR]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def entropy_of_spectrum(vals: np.ndarray) -> float:
    """Entropy in bits of a nonnegative spectrum (not necessarily validated)."""
    v = np.asarray(vals, dtype=float)
    v = v[v > _LOG_FLOOR]
    return float(-np.sum(v * np.log2(v))) + 0.0 if v.size else 0.0


def vn_entropy(rho: DensityLike) -> float:
    """Von Neumann entropy -tr(rho log2 rho) in bits."""
    r = as_density(rho)
    vals = (
        np.real(np.diagonal(r.matrix))
        if _is_diag(r.matrix)
        else eig_hermitian(r.matrix).eigenvalues
    )
    return entropy_of_spectrum(np.clip(vals, 0.0, None))


def _is_diag(m: np.ndarray) -> bool:
    return bool(np.max(np.abs(m - np.diag(np.diagonal(m)))) <= 1e-14)


def _sqrt_fid_oriented(r1: np.ndarray, r2: np.ndarray) -> float:
    root = matrix_sqrt_psd(r1)
    mid = root @ r2 @ root
    mid = (mid + dagger(mid)) / 2.0
    vals = np.clip(np.linalg.eigvalsh(mid), 0.0, None)
    return float(np.sum(np.sqrt(vals)))


def sqrt_fidelity(rho1: DensityLike, rho2: DensityLike) -> float:
    """G(rho1, rho2) = tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), symmetrised.

    The analytic quantity is symmetric in its arguments; averaging the two
    orientations suppresses the asymmetric rounding of the matrix square root.
    """
    r1, r2 = as_density(rho1), as_density(rho2)
    if r1.dim != r2.dim:
        raise DimensionMismatch(f"fidelity operands have dims {r1.dim} and {r2.dim}")
    if _is_diag(r1.matrix) and _is_diag(r2.matrix):
        p = np.clip(np.real(np.diagonal(r1.matrix)), 0.0, None)
        q = np.clip(np.real(np.diagonal(r2.matrix)), 0.0, None)
        g = float(np.sum(np.sqrt(p * q)))
    else:
        g = 0.5 * (_sqrt_fid_oriented(r1.matrix, r2.matrix) + _sqrt_fid_oriented(r2.matrix, r1.matrix))
    return min(g, 1.0)


def fidelity(rho1: DensityLike, rho2: DensityLike) -> float:
    """Bures-Uhlmann fidelity F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 in [0, 1]."""
    return sqrt_fidelity(rho1, rho2) ** 2


def classical_fidelity(p, q) -> float:
    """Bhattacharyya overlap (sum_i sqrt(p_i q_i))^2; equals 1 iff p = q."""
    a = as_prob_vector(p, "classical_fidelity p")
    b = as_prob_vector(q, "classical_fidelity q")
    if a.size != b.size:
        raise LengthMismatch(f"distributions have lengths {a.size} and {b.size}")
    return min(1.0, float(np.sum(np.sqrt(a * b)) ** 2))


def holevo(ensemble: Ensemble) -> float:
    """Holevo quantity chi = S(mean state) - sum_i p_i S(rho_i), in bits."""
    avg = vn_entropy(ensemble.average())
    cond = sum(p * vn_entropy(rho) for p, rho in zip(ensemble.probs, ensemble.states))
    return max(0.0, float(avg - cond))


def _check_same_shape(a: Ensemble, b: Ensemble) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"ensembles have {len(a)} and {len(b)} states")
    if a.dim != b.dim:
        raise DimensionMismatch(f"ensembles have dims {a.dim} and {b.dim}")
    if np.max(np.abs(a.probs - b.probs)) > PROB_TOL:
        raise ProbabilityMismatch(
            "ensembles must share one probability vector (max deviation "
            f"{float(np.max(np.abs(a.probs - b.probs))):.3e} > {PROB_TOL})"
        )


def avg_ensemble_fidelity(a: Ensemble, b: Ensemble) -> float:
    """Average fidelity sum_i p_i F(rho_i, sigma_i) between same-shape ensembles."""
    _check_same_shape(a, b)
    return float(
        sum(p * fidelity(r, s) for p, r, s in zip(a.probs, a.states, b.states))
    )


@dataclass(frozen=True)
class ContinuityBound:
    bound: float
    applicable: bool
    avg_fidelity: float


def holevo_continuity_bound(a: Ensemble, b: Ensemble) -> ContinuityBound:
    """Bound on |chi(A) - chi(B)| in terms of the average ensemble fidelity.

    The bound (2 + 2*sqrt(2)) * sqrt(1 - Fbar) * log2(d) + 1 applies only when
    Fbar exceeds sqrt(35/36); ``applicable`` reports that gate.
    """
    fbar = avg_ensemble_fidelity(a, b)
    bound = CONTINUITY_COEFF * np.sqrt(max(0.0, 1.0 - fbar)) * np.log2(a.dim) + 1.0
    return ContinuityBound(float(bound), fbar > CONTINUITY_THRESHOLD, fbar)


def avg_entropy_continuity_bound(a: Ensemble, b: Ensemble) -> float:
    """Bound on |sum p_i S(rho_i) - sum p_i S(sigma_i)|: 2 sqrt(1-Fbar) log2 d + 1."""
    fbar = avg_ensemble_fidelity(a, b)
    return float(2.0 * np.sqrt(max(0.0, 1.0 - fbar)) * np.log2(a.dim) + 1.0)


def measured_classical_fidelity(rho1: DensityLike, rho2: DensityLike, povm: Povm) -> float:
    """Classical fidelity of the two outcome distributions induced by a POVM.

    For any measurement this is at least the Bures-Uhlmann fidelity of the
    states; equality is achieved for commuting states measured in a common
    eigenbasis.
    """
    r1, r2 = as_density(rho1), as_density(rho2)
    if r1.dim != r2.dim:
        raise DimensionMismatch(f"states have dims {r1.dim} and {r2.dim}")
    if povm.dim != r1.dim:
        raise InvalidPovm(f"POVM dimension {povm.dim} does not match state dimension {r1.dim}")
    return classical_fidelity(povm.outcome_probs(r1), povm.outcome_probs(r2))
