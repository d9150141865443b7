"""Purification constructions and purification-based compression rates.

The canonical purification of a state with spectral decomposition
rho = sum_i lambda_i |e_i><e_i| is |psi> = sum_i sqrt(lambda_i) |e_i> x |e_i>.
Tracing out either tensor factor recovers rho.  For simultaneously diagonal
states the canonical purifications achieve the Bures-Uhlmann overlap limit
pairwise, which is what makes them useful for visible compression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousEigenbasis,
    DomainError,
    NotCommuting,
    NotOrthonormal,
    ValidationError,
)
from .measures import (
    Ensemble,
    classical_fidelity,
    entropy_of_spectrum,
    holevo,
    shannon_entropy,
    vn_entropy,
)
from .qmat import (
    DensityLike,
    DensityOperator,
    PureState,
    as_density,
    commutator_norm,
    dagger,
    eig_hermitian,
)

COMMUTE_TOL = 1e-8
DEGENERACY_TOL = 1e-10
_PHASE_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure state on H_d x H_d whose second-factor partial trace is ``source``."""

    state: PureState
    source: DensityOperator
    factor_dim: int


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero amplitude is real positive.

    Overlaps between purifications are phase sensitive; this pins a
    reproducible representative for every eigenvector.
    """
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > _PHASE_FLOOR)
        if nz.size:
            pivot = col[nz[0]]
            out[:, j] = col * (pivot.conj() / abs(pivot))
    return out


def canonical_purification(rho: DensityLike) -> Purification:
    """Purification built from the state's own eigenbasis on both factors.

    Eigenvalues are taken in descending order with stable ties and eigenvector
    phases fixed, so the construction is deterministic.
    """
    r = as_density(rho)
    spec = eig_hermitian(r.matrix)
    vecs = _fix_phases(spec.eigenvectors)
    d = r.dim
    psi = np.zeros(d * d, dtype=complex)
    for lam, col in zip(spec.eigenvalues, vecs.T):
        if lam > 0.0:
            psi += np.sqrt(lam) * np.kron(col, col)
    nrm = np.linalg.norm(psi)
    return Purification(PureState.from_vector(psi / nrm), r, d)


def purification_vector_in_basis(diag_probs: np.ndarray) -> np.ndarray:
    """Canonical purification of diag(p) written in the {|e_i>x|e_i>} subspace.

    For states sharing one diagonalising basis, all canonical purifications
    live in this d-dimensional subspace, and the representation is just the
    entrywise square root of the diagonal.
    """
    p = np.clip(np.asarray(diag_probs, dtype=float), 0.0, None)
    return np.sqrt(p)


def _common_diagonal(
    rho1: DensityOperator, rho2: DensityOperator, basis: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of both states in a verified common eigenbasis."""
    c = commutator_norm(rho1.matrix, rho2.matrix)
    if c > COMMUTE_TOL:
        raise NotCommuting(
            f"states do not commute: max |[rho1, rho2]| = {c:.3e} > {COMMUTE_TOL}"
        )
    if basis is None:
        spec = eig_hermitian(rho1.matrix)
        basis = spec.eigenvectors
        rotated2 = dagger(basis) @ rho2.matrix @ basis
        off = np.max(np.abs(rotated2 - np.diag(np.diagonal(rotated2))))
        if off > COMMUTE_TOL:
            gaps = np.abs(np.diff(spec.eigenvalues))
            if gaps.size and np.min(gaps) < DEGENERACY_TOL:
                raise AmbiguousEigenbasis(
                    "rho1 has a degenerate spectrum; supply the common eigenbasis explicitly"
                )
            raise NotCommuting(
                f"default eigenbasis fails to diagonalise rho2 (off-diagonal {off:.3e})"
            )
    else:
        basis = np.asarray(basis, dtype=complex)
        if basis.shape != (rho1.dim, rho1.dim):
            raise NotOrthonormal(
                f"supplied basis must be a full {rho1.dim}x{rho1.dim} unitary, "
                f"got shape {basis.shape}"
            )
        gram = dagger(basis) @ basis
        defect = float(np.max(np.abs(gram - np.eye(basis.shape[1]))))
        if defect > COMMUTE_TOL:
            raise NotOrthonormal(f"supplied basis not orthonormal (defect {defect:.3e})")
        for name, rho in (("rho1", rho1), ("rho2", rho2)):
            rot = dagger(basis) @ rho.matrix @ basis
            off = np.max(np.abs(rot - np.diag(np.diagonal(rot))))
            if off > COMMUTE_TOL:
                raise NotCommuting(
                    f"supplied basis fails to diagonalise {name} (off-diagonal {off:.3e})"
                )
    p = np.clip(np.real(np.diagonal(dagger(basis) @ rho1.matrix @ basis)), 0.0, None)
    q = np.clip(np.real(np.diagonal(dagger(basis) @ rho2.matrix @ basis)), 0.0, None)
    return p, q


def canonical_overlap(
    rho1: DensityLike, rho2: DensityLike, basis: np.ndarray | None = None
) -> float:
    """|<psi1|psi2>|^2 for canonical purifications in a common eigenbasis.

    Equals the Bures-Uhlmann fidelity of the two commuting states, i.e. the
    purifications are optimally parallel.  When either spectrum is degenerate
    the basis must be supplied, because the purifications are only pinned down
    by an explicit shared diagonalising basis.
    """
    r1, r2 = as_density(rho1), as_density(rho2)
    p, q = _common_diagonal(r1, r2, basis)
    return classical_fidelity(p / p.sum(), q / q.sum())


def upsilon_rate(epsilon: float) -> float:
    """Purification-scheme rate for the symmetric two-state family.

    For the equiprobable pair diag(eps, 1-eps) / diag(1-eps, eps) the optimal
    purification mixture has entropy
    H(1/2 + sqrt(eps(1-eps)), 1/2 - sqrt(eps(1-eps))) qubits/signal.
    """
    e = float(epsilon)
    if not (0.0 <= e <= 0.5):
        raise DomainError(f"upsilon_rate requires 0 <= epsilon <= 1/2, got {e}")
    s = np.sqrt(e * (1.0 - e))
    return shannon_entropy([0.5 + s, 0.5 - s])


def two_state_purification_rate(ensemble: Ensemble, basis: np.ndarray | None = None) -> float:
    """Entropy of the canonical-purification mixture for a two-state commuting ensemble.

    The mixture p1 |psi1><psi1| + p2 |psi2><psi2| has rank <= 2; its spectrum
    follows from the 2x2 Gram matrix with the purification overlap
    c = sum_i sqrt(p_i q_i).
    """
    if len(ensemble) != 2:
        raise DomainError("two_state_purification_rate needs exactly two states")
    p, q = _common_diagonal(ensemble.states[0], ensemble.states[1], basis)
    c = float(np.sum(np.sqrt(p * q)))
    w1, w2 = float(ensemble.probs[0]), float(ensemble.probs[1])
    disc = np.sqrt(max(0.0, (w1 - w2) ** 2 + 4.0 * w1 * w2 * c * c))
    lam = np.array([(1.0 + disc) / 2.0, max(0.0, (1.0 - disc) / 2.0)])
    return entropy_of_spectrum(lam)


def photographic_negative_ensemble(d: int) -> Ensemble:
    """Equiprobable ensemble of the d 'hole at position i' diagonal states.

    State i is uniform weight 1/(d-1) on every basis index except i; the mean
    state is maximally mixed.
    """
    if d < 3:
        raise DomainError(f"photographic negative ensemble needs d >= 3, got {d}")
    states = []
    for i in range(d):
        diag = np.full(d, 1.0 / (d - 1))
        diag[i] = 0.0
        states.append(np.diag(diag).astype(complex))
    return Ensemble.from_lists(np.full(d, 1.0 / d), states)


@dataclass(frozen=True)
class PhotographicNegativeReport:
    d: int
    mixture_spectrum: np.ndarray
    q: float
    chi: float

    @property
    def gap(self) -> float:
        return self.q - self.chi


SPECTRUM_TOL = 1e-8


def photographic_negative_report(d: int) -> PhotographicNegativeReport:
    """Spectrum and rates of the equal mixture of canonical purifications.

    The purifications all lie in the d-dimensional subspace spanned by
    {|e_i> x |e_i>}, so the mixture is built there directly.  Its spectrum is
    verified against the closed form {(d-1)/d, (d-1) copies of 1/(d(d-1))};
    q is the entropy of the constructed mixture and chi the Holevo quantity of
    the source ensemble.
    """
    ensemble = photographic_negative_ensemble(d)
    vectors = np.column_stack(
        [
            purification_vector_in_basis(np.real(np.diagonal(rho.matrix)))
            for rho in ensemble.states
        ]
    )
    mixture = (vectors * ensemble.probs) @ vectors.T
    mixture = DensityOperator.from_matrix(mixture.astype(complex))
    spec = eig_hermitian(mixture.matrix).eigenvalues

    expected = np.concatenate([[(d - 1) / d], np.full(d - 1, 1.0 / (d * (d - 1)))])
    defect = float(np.max(np.abs(spec - expected)))
    if defect > SPECTRUM_TOL:
        raise ValidationError(
            f"purification mixture spectrum deviates from closed form by {defect:.3e}"
        )

    q = vn_entropy(mixture)
    chi = holevo(ensemble)
    spec_ro = spec.copy()
    spec_ro.setflags(write=False)
    return PhotographicNegativeReport(d=d, mixture_spectrum=spec_ro, q=q, chi=chi)
