"""Small-block coding simulator: typical subspaces, project-and-patch, scores.

A block source emits length-N product strings from a base ensemble.  The
simulator scores encode/decode schemes under two criteria: global fidelity
(whole-block Bures-Uhlmann fidelity, probability weighted) and local fidelity
(product of per-position marginal fidelities).  It also computes the
subspace-support fidelity ceiling, which is what forces the rate of any
unitary-decoded scheme up to the mean-state entropy.

Rate conventions for a target of q qubits/signal at block length N:

* a realisable coding scheme occupies whole channel qubits, so its subspace
  has 2^ceil(qN) dimensions (capped at the full space);
* the fidelity ceiling is computed against ceil(2^(qN)) retained eigenvalues,
  the integer count closest to the raw dimension budget from above, so the
  bound is never understated.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionOverflow,
    DomainError,
    NotCommuting,
)
from .measures import Ensemble, classical_fidelity, fidelity, vn_entropy
from .qmat import (
    DEFAULT_DIM_CAP,
    DensityLike,
    DensityOperator,
    as_density,
    commutator_norm,
    dagger,
    eig_hermitian,
    is_diagonal,
    partial_trace,
)
from .sampling import block_generator

EXACT_SWEEP_CAP = 1024
DEFAULT_MC_SAMPLES = 2000
MC_BLOCK = 256
_RATE_EPS = 1e-9


def scheme_subspace_dim(rate: float, n_blocks: int, full_dim: int) -> int:
    """Channel dimension of a scheme using whole qubits: 2^ceil(rate*N), capped."""
    if rate < 0:
        raise DomainError(f"rate must be nonnegative, got {rate}")
    qubits = math.ceil(rate * n_blocks - _RATE_EPS)
    return int(min(2 ** max(qubits, 0), full_dim))


def ceiling_subspace_dim(rate: float, n_blocks: int, full_dim: int) -> int:
    """Retained-eigenvalue count for the fidelity ceiling: ceil(2^(rate*N)), capped."""
    if rate < 0:
        raise DomainError(f"rate must be nonnegative, got {rate}")
    raw = 2.0 ** (rate * n_blocks)
    return int(min(max(1, math.ceil(raw * (1.0 - _RATE_EPS))), full_dim))


@dataclass(frozen=True, eq=False)
class BlockSource:
    """Base ensemble emitted independently at each of ``n_blocks`` positions."""

    base: Ensemble
    n_blocks: int

    @classmethod
    def build(cls, base: Ensemble, n_blocks: int, dim_cap: int = DEFAULT_DIM_CAP) -> "BlockSource":
        if n_blocks < 1:
            raise DomainError(f"n_blocks must be >= 1, got {n_blocks}")
        if base.dim**n_blocks > dim_cap:
            raise DimensionOverflow(
                f"block dimension {base.dim}^{n_blocks} exceeds cap {dim_cap}"
            )
        return cls(base, int(n_blocks))

    @property
    def full_dim(self) -> int:
        return self.base.dim**self.n_blocks

    @property
    def n_strings(self) -> int:
        return len(self.base) ** self.n_blocks

    def string_prob(self, string: tuple[int, ...]) -> float:
        return float(np.prod([self.base.probs[i] for i in string]))

    def average_weights(self) -> np.ndarray:
        """Diagonal of the mean block state when the base states are diagonal."""
        mu = np.real(np.diagonal(self.base.average().matrix))
        return kron_power_vector(np.clip(mu, 0.0, None), self.n_blocks)


def kron_power_vector(v: np.ndarray, n: int) -> np.ndarray:
    """n-fold Kronecker power of a vector."""
    return reduce(np.kron, [np.asarray(v, dtype=float)] * n)


def common_eigenbasis(ensemble: Ensemble, tol: float = 1e-8) -> np.ndarray | None:
    """Unitary diagonalising every ensemble state at once, or None.

    Mutual commutation is necessary; the basis is found from a generic
    Hermitian combination of the states and then verified.
    """
    mats = [s.matrix for s in ensemble.states]
    if all(is_diagonal(m, tol=1e-12) for m in mats):
        return np.eye(ensemble.dim, dtype=complex)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if commutator_norm(mats[i], mats[j]) > tol:
                return None
    # Generic coefficients split accidental degeneracies of the combination.
    coeffs = np.array([2.0 + np.sin(3.7 * (k + 1)) for k in range(len(mats))])
    combo = sum(c * m for c, m in zip(coeffs, mats))
    basis = eig_hermitian(combo).eigenvectors
    for m in mats:
        rot = dagger(basis) @ m @ basis
        if not is_diagonal(rot, tol=tol):
            return None
    return basis


def diagonalized(ensemble: Ensemble) -> tuple[Ensemble, np.ndarray]:
    """Rotate a mutually commuting ensemble into its common eigenbasis."""
    basis = common_eigenbasis(ensemble)
    if basis is None:
        raise NotCommuting("ensemble states do not share an eigenbasis")
    states = [dagger(basis) @ s.matrix @ basis for s in ensemble.states]
    states = [np.diag(np.clip(np.real(np.diagonal(m)), 0.0, None)).astype(complex) for m in states]
    return Ensemble.from_lists(ensemble.probs.copy(), states), basis


@dataclass(frozen=True, eq=False)
class TypicalSubspace:
    """Span of retained eigenvectors of a reference state, plus its tail weight.

    Either ``coordinates`` (retained computational-basis indices, heaviest
    first) or ``basis`` (dense orthonormal columns, heaviest first) is set.
    ``eta`` is the reference state's weight outside the subspace; the patch
    state is the heaviest retained vector.
    """

    full_dim: int
    eta: float
    coordinates: np.ndarray | None = None
    basis: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.coordinates) if self.coordinates is not None else self.basis.shape[1]

    def projector(self) -> np.ndarray:
        if self.coordinates is not None:
            p = np.zeros((self.full_dim, self.full_dim), dtype=complex)
            p[self.coordinates, self.coordinates] = 1.0
            return p
        return self.basis @ dagger(self.basis)


def typical_subspace(reference: DensityLike, subspace_dim: int) -> TypicalSubspace:
    """Subspace of the ``subspace_dim`` largest-eigenvalue eigenvectors of a state."""
    rho = as_density(reference)
    if not (1 <= subspace_dim <= rho.dim):
        raise DomainError(
            f"subspace_dim must lie in [1, {rho.dim}], got {subspace_dim}"
        )
    if is_diagonal(rho.matrix, tol=1e-14):
        w = np.clip(np.real(np.diagonal(rho.matrix)), 0.0, None)
        return typical_subspace_from_weights(w, subspace_dim)
    spec = eig_hermitian(rho.matrix)
    kept_vals, kept_vecs = spec.top_k(subspace_dim)
    eta = float(max(0.0, 1.0 - np.sum(kept_vals)))
    return TypicalSubspace(full_dim=rho.dim, eta=eta, basis=np.ascontiguousarray(kept_vecs))


def typical_subspace_from_weights(weights: np.ndarray, subspace_dim: int) -> TypicalSubspace:
    """Coordinate-aligned subspace retaining the heaviest diagonal weights.

    Ties are broken by original index order (stable sort) so the retained set
    is deterministic.
    """
    w = np.asarray(weights, dtype=float)
    if not (1 <= subspace_dim <= w.size):
        raise DomainError(f"subspace_dim must lie in [1, {w.size}], got {subspace_dim}")
    order = np.argsort(-w, kind="stable")
    kept = order[:subspace_dim]
    eta = float(max(0.0, 1.0 - w[kept].sum()))
    kept = np.ascontiguousarray(kept)
    kept.setflags(write=False)
    return TypicalSubspace(full_dim=int(w.size), eta=eta, coordinates=kept)


def project_and_patch(rho: DensityLike, subspace: TypicalSubspace) -> DensityOperator:
    """Compress a state into the subspace: Pi rho Pi plus the lost weight on the patch.

    The patched weight is the state's own tail tr((I - Pi) rho), so the output
    has unit trace; its fidelity with the input is at least (1 - tail)^2.
    """
    r = as_density(rho)
    if r.dim != subspace.full_dim:
        raise DimensionMismatch(
            f"state dimension {r.dim} does not match subspace ambient dimension "
            f"{subspace.full_dim}"
        )
    if subspace.coordinates is not None:
        kept = subspace.coordinates
        out = np.zeros_like(r.matrix)
        out[np.ix_(kept, kept)] = r.matrix[np.ix_(kept, kept)]
        tail = max(0.0, 1.0 - float(np.real(np.trace(out))))
        patch = kept[0]
        out[patch, patch] += tail
    else:
        b = subspace.basis
        inner = dagger(b) @ r.matrix @ b
        out = b @ inner @ dagger(b)
        tail = max(0.0, 1.0 - float(np.real(np.trace(inner))))
        patch_vec = b[:, 0]
        out = out + tail * np.outer(patch_vec, patch_vec.conj())
    return DensityOperator.from_matrix((out + dagger(out)) / 2.0)


def project_and_patch_diagonal(diag: np.ndarray, subspace: TypicalSubspace) -> np.ndarray:
    """Diagonal-vector form of project-and-patch (coordinate subspaces only)."""
    if subspace.coordinates is None:
        raise DimensionMismatch("diagonal fast path needs a coordinate-aligned subspace")
    out = np.zeros_like(diag)
    kept = subspace.coordinates
    out[kept] = diag[kept]
    out[kept[0]] += max(0.0, 1.0 - out.sum())
    return out


def fidelity_subspace_upper_bound(rho: DensityLike, subspace_dim: int) -> float:
    """Largest fidelity any state supported on ``subspace_dim`` dimensions can reach.

    Equals the sum of the state's ``subspace_dim`` largest eigenvalues.
    """
    r = as_density(rho)
    if not (1 <= subspace_dim <= r.dim):
        raise DomainError(f"subspace_dim must lie in [1, {r.dim}], got {subspace_dim}")
    vals = eig_hermitian(r.matrix).eigenvalues
    return float(min(1.0, np.sum(vals[:subspace_dim])))


def power_spectrum_top_sum(base_avg: DensityLike, n_blocks: int, retained: int,
                           dim_cap: int = DEFAULT_DIM_CAP) -> float:
    """Sum of the ``retained`` largest eigenvalues of the N-fold power of a state.

    The eigenvalues of the power are N-fold products of the base eigenvalues,
    so no block-sized matrix is ever materialised.
    """
    rho = as_density(base_avg)
    if rho.dim**n_blocks > dim_cap:
        raise DimensionOverflow(
            f"power dimension {rho.dim}^{n_blocks} exceeds cap {dim_cap}"
        )
    w = kron_power_vector(eig_hermitian(rho.matrix).eigenvalues, n_blocks)
    if not (1 <= retained <= w.size):
        raise DomainError(f"retained count {retained} outside [1, {w.size}]")
    top = np.partition(w, -retained)[-retained:]
    return float(min(1.0, top.sum()))


def lemma_a1_ceiling(source: BlockSource, rate: float) -> tuple[float, int]:
    """Fidelity ceiling (and retained count) at a rate, for the block mean state."""
    k = ceiling_subspace_dim(rate, source.n_blocks, source.full_dim)
    return power_spectrum_top_sum(source.base.average(), source.n_blocks, k), k


class Scheme:
    """Encode/decode pair collapsed to its net action on block states."""

    channel_dim: int = 0

    def apply(self, sigma: DensityOperator) -> DensityOperator:
        raise NotImplementedError

    def apply_diagonal(self, diag: np.ndarray) -> np.ndarray | None:
        """Diagonal-in, diagonal-out fast path; None when unsupported."""
        return None


class IdentityScheme(Scheme):
    """Transmit the block untouched (channel as large as the source)."""

    def __init__(self, full_dim: int):
        self.channel_dim = int(full_dim)

    def apply(self, sigma: DensityOperator) -> DensityOperator:
        return sigma

    def apply_diagonal(self, diag: np.ndarray) -> np.ndarray:
        return diag


class FixedOutputScheme(Scheme):
    """Decode every block to one fixed state (nothing need be sent)."""

    def __init__(self, output: DensityLike):
        self.output = as_density(output)
        self.channel_dim = 1

    def apply(self, sigma: DensityOperator) -> DensityOperator:
        return self.output

    def apply_diagonal(self, diag: np.ndarray) -> np.ndarray | None:
        if is_diagonal(self.output.matrix, tol=1e-14):
            return np.clip(np.real(np.diagonal(self.output.matrix)), 0.0, None)
        return None


class ProjectPatchScheme(Scheme):
    """Project into a typical subspace of the block mean state, patching the tail."""

    def __init__(self, subspace: TypicalSubspace):
        self.subspace = subspace
        self.channel_dim = subspace.dim

    def apply(self, sigma: DensityOperator) -> DensityOperator:
        return project_and_patch(sigma, self.subspace)

    def apply_diagonal(self, diag: np.ndarray) -> np.ndarray | None:
        if self.subspace.coordinates is None:
            return None
        return project_and_patch_diagonal(diag, self.subspace)


def project_patch_scheme(source: BlockSource, rate: float) -> ProjectPatchScheme:
    """Project-and-patch scheme at a qubits/signal rate for this source.

    The subspace spans the heaviest eigenvectors of the block mean state; for
    diagonal bases it is coordinate aligned and block matrices are never built.
    """
    k = scheme_subspace_dim(rate, source.n_blocks, source.full_dim)
    base_states = [s.matrix for s in source.base.states]
    if all(is_diagonal(m, tol=1e-12) for m in base_states):
        return ProjectPatchScheme(typical_subspace_from_weights(source.average_weights(), k))
    avg = source.base.average()
    spec = eig_hermitian(avg.matrix)
    w = kron_power_vector(spec.eigenvalues, source.n_blocks)
    order = np.argsort(-w, kind="stable")[:k]
    if source.full_dim * k > 2**22:
        raise DimensionOverflow(
            f"dense typical subspace of size {source.full_dim} x {k} is too large"
        )
    cols = np.empty((source.full_dim, k), dtype=complex)
    digits = _decode_indices(order, source.base.dim, source.n_blocks)
    for col, idx in enumerate(digits):
        vec = reduce(np.kron, [spec.eigenvectors[:, j] for j in idx])
        cols[:, col] = vec
    eta = float(max(0.0, 1.0 - w[order].sum()))
    return ProjectPatchScheme(
        TypicalSubspace(full_dim=source.full_dim, eta=eta, basis=cols)
    )


def _decode_indices(flat: np.ndarray, d: int, n: int) -> list[tuple[int, ...]]:
    out = []
    for f in flat:
        digits = []
        x = int(f)
        for _ in range(n):
            digits.append(x % d)
            x //= d
        out.append(tuple(reversed(digits)))
    return out


@dataclass(frozen=True)
class FidelityScore:
    value: float
    stderr: float | None
    method: str
    n_terms: int


def _diagonal_path_available(source: BlockSource, scheme: Scheme) -> bool:
    if not all(is_diagonal(s.matrix, tol=1e-12) for s in source.base.states):
        return False
    probe = np.zeros(source.full_dim)
    probe[0] = 1.0
    return scheme.apply_diagonal(probe) is not None


def _string_diag(source: BlockSource, string: tuple[int, ...]) -> np.ndarray:
    diags = [np.clip(np.real(np.diagonal(source.base.states[i].matrix)), 0.0, None) for i in string]
    return reduce(np.kron, diags)


def _string_dense(source: BlockSource, string: tuple[int, ...]) -> DensityOperator:
    mats = [source.base.states[i].matrix for i in string]
    return DensityOperator._wrap(reduce(np.kron, mats))


def _local_product_diag(source: BlockSource, string, out_diag: np.ndarray) -> float:
    d, n = source.base.dim, source.n_blocks
    shaped = out_diag.reshape((d,) * n)
    total = out_diag.sum()
    prod = 1.0
    for k, i in enumerate(string):
        marginal = shaped.sum(axis=tuple(j for j in range(n) if j != k))
        marginal = np.clip(marginal, 0.0, None)
        s = marginal.sum()
        marginal = marginal / s if s > 0 else marginal
        base_diag = np.clip(np.real(np.diagonal(source.base.states[i].matrix)), 0.0, None)
        prod *= classical_fidelity(base_diag, marginal)
    return prod if total > 0 else 0.0


def _local_product_dense(source: BlockSource, string, out: DensityOperator) -> float:
    d, n = source.base.dim, source.n_blocks
    prod = 1.0
    for k, i in enumerate(string):
        marginal = partial_trace(out, [d] * n, keep=k)
        prod *= fidelity(source.base.states[i], marginal)
    return prod


def _score_string(source: BlockSource, scheme: Scheme, string, diagonal: bool,
                  want_local: bool) -> tuple[float, float]:
    if diagonal:
        sig = _string_diag(source, string)
        out = scheme.apply_diagonal(sig)
        g = classical_fidelity(sig, out)
        loc = _local_product_diag(source, string, out) if want_local else 0.0
    else:
        sig = _string_dense(source, string)
        out = scheme.apply(sig)
        g = fidelity(sig, out)
        loc = _local_product_dense(source, string, out) if want_local else 0.0
    return g, loc


def _exact_scores(source: BlockSource, scheme: Scheme, want_local: bool) -> tuple[FidelityScore, FidelityScore]:
    diagonal = _diagonal_path_available(source, scheme)
    n_states = len(source.base)
    total_g = 0.0
    total_l = 0.0
    count = 0
    for string in itertools.product(range(n_states), repeat=source.n_blocks):
        p = source.string_prob(string)
        if p == 0.0:
            continue
        g, loc = _score_string(source, scheme, string, diagonal, want_local)
        total_g += p * g
        total_l += p * loc
        count += 1
    method = "exact-diagonal" if diagonal else "exact-dense"
    clamp = lambda v: min(1.0, max(0.0, float(v)))
    return (
        FidelityScore(clamp(total_g), None, method, count),
        FidelityScore(clamp(total_l), None, method, count),
    )


def _mc_scores(source: BlockSource, scheme: Scheme, want_local: bool, n_samples: int,
               seed: int, workers: int) -> tuple[FidelityScore, FidelityScore]:
    diagonal = _diagonal_path_available(source, scheme)
    n_states = len(source.base)
    probs = source.base.probs

    def run_block(block: int) -> tuple[np.ndarray, np.ndarray]:
        rng = block_generator(seed, block)
        m = min(MC_BLOCK, n_samples - block * MC_BLOCK)
        gs = np.empty(m)
        ls = np.empty(m)
        picks = rng.choice(n_states, size=(m, source.n_blocks), p=probs)
        for row in range(m):
            string = tuple(int(x) for x in picks[row])
            gs[row], ls[row] = _score_string(source, scheme, string, diagonal, want_local)
        return gs, ls

    n_blocks = math.ceil(n_samples / MC_BLOCK)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_block, range(n_blocks)))
    else:
        parts = [run_block(b) for b in range(n_blocks)]
    gs = np.concatenate([p[0] for p in parts])
    ls = np.concatenate([p[1] for p in parts])

    def summarise(xs: np.ndarray) -> FidelityScore:
        mean = float(xs.mean())
        stderr = float(xs.std(ddof=1) / np.sqrt(xs.size)) if xs.size > 1 else 0.0
        return FidelityScore(mean, stderr, "monte-carlo", int(xs.size))

    return summarise(gs), summarise(ls)


def _scores(source: BlockSource, scheme: Scheme, want_local: bool, mode: str,
            n_samples: int, seed: int, workers: int,
            exact_cap: int) -> tuple[FidelityScore, FidelityScore]:
    if mode not in ("auto", "exact", "mc"):
        raise DomainError(f"mode must be auto|exact|mc, got {mode!r}")
    diagonal = _diagonal_path_available(source, scheme)
    exact_ok = source.n_strings <= exact_cap or diagonal
    if mode == "exact" and not exact_ok:
        raise DimensionOverflow(
            f"exact sweep over {source.n_strings} strings exceeds cap {exact_cap} "
            "and no diagonal fast path applies"
        )
    if mode == "exact" or (mode == "auto" and exact_ok):
        return _exact_scores(source, scheme, want_local)
    return _mc_scores(source, scheme, want_local, n_samples, seed, workers)


def global_fidelity_score(source: BlockSource, scheme: Scheme, mode: str = "auto",
                          n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0,
                          workers: int = 1, exact_cap: int = EXACT_SWEEP_CAP) -> FidelityScore:
    """Probability-weighted whole-block fidelity of the scheme's output.

    Exact when the string sweep is feasible (always on the diagonal fast
    path); otherwise a seeded Monte Carlo estimate with standard error.
    """
    g, _ = _scores(source, scheme, False, mode, n_samples, seed, workers, exact_cap)
    return g


def local_fidelity_score(source: BlockSource, scheme: Scheme, mode: str = "auto",
                         n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0,
                         workers: int = 1, exact_cap: int = EXACT_SWEEP_CAP) -> FidelityScore:
    """Probability-weighted product of per-position marginal fidelities."""
    _, loc = _scores(source, scheme, True, mode, n_samples, seed, workers, exact_cap)
    return loc


@dataclass(frozen=True)
class Theorem7Row:
    n_blocks: int
    rate_down: float
    ceiling_dim: int
    ceiling: float
    rate_up: float
    scheme_dim: int
    eta_plus: float
    achieved: float

    @property
    def patch_lower_bound(self) -> float:
        return (1.0 - self.eta_plus) ** 2


def theorem7_demo(base: Ensemble, delta: float, n_list, dim_cap: int = DEFAULT_DIM_CAP,
                  seed: int = 0) -> list[Theorem7Row]:
    """Both halves of the unitary-decoding rate argument at small block lengths.

    For each N the row reports the fidelity ceiling when the rate sits delta
    below the mean-state entropy (it shrinks with N, so no unitary-decoded
    scheme can stay faithful) and the exact project-and-patch fidelity delta
    above it (it stays above both 1 - 2*eta and (1 - eta)^2).
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    s_bar = vn_entropy(base.average())
    rows = []
    for n in n_list:
        source = BlockSource.build(base, int(n), dim_cap=dim_cap)
        rate_down = max(0.0, s_bar - delta)
        ceiling, k_down = lemma_a1_ceiling(source, rate_down)
        rate_up = s_bar + delta
        scheme = project_patch_scheme(source, rate_up)
        achieved = global_fidelity_score(source, scheme, seed=seed)
        rows.append(
            Theorem7Row(
                n_blocks=int(n),
                rate_down=rate_down,
                ceiling_dim=k_down,
                ceiling=ceiling,
                rate_up=rate_up,
                scheme_dim=scheme.channel_dim,
                eta_plus=scheme.subspace.eta,
                achieved=achieved.value,
            )
        )
    return rows
