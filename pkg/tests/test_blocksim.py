import math

import numpy as np
import pytest

from mixcomp import sampling
from mixcomp.blocksim import (
    BlockSource,
    FixedOutputScheme,
    IdentityScheme,
    ceiling_subspace_dim,
    common_eigenbasis,
    diagonalized,
    fidelity_subspace_upper_bound,
    global_fidelity_score,
    lemma_a1_ceiling,
    local_fidelity_score,
    project_and_patch,
    project_patch_scheme,
    scheme_subspace_dim,
    theorem7_demo,
    typical_subspace,
    typical_subspace_from_weights,
)
from mixcomp.errors import DimensionMismatch, DimensionOverflow, DomainError
from mixcomp.measures import Ensemble, fidelity, vn_entropy
from mixcomp.qmat import maximally_mixed

from conftest import diag_state


def two_coin_base(a=0.9) -> Ensemble:
    return Ensemble.from_lists(
        [0.5, 0.5], [diag_state(a, 1 - a), diag_state(1 - a, a)]
    )


def top_product_sum_oracle(mu, n, retained) -> float:
    """Independent ceiling oracle: class enumeration with binomial counts (d = 2)."""
    p, q = mu
    classes = sorted(
        ((p**a) * (q ** (n - a)), math.comb(n, a)) for a in range(n + 1)
    )[::-1]
    total, left = 0.0, retained
    for value, count in classes:
        take = min(count, left)
        total += take * value
        left -= take
        if left == 0:
            break
    return total


class TestRateQuantisation:
    def test_scheme_uses_whole_qubits(self):
        assert scheme_subspace_dim(0.85, 4, 16) == 16  # ceil(3.4) = 4 qubits
        assert scheme_subspace_dim(0.85, 8, 256) == 128
        assert scheme_subspace_dim(1.15, 12, 4096) == 4096  # capped at full space

    def test_ceiling_uses_raw_dimension(self):
        assert ceiling_subspace_dim(0.85, 4, 16) == 11  # ceil(2^3.4)
        assert ceiling_subspace_dim(0.85, 8, 256) == 112
        assert ceiling_subspace_dim(0.85, 12, 4096) == 1177

    def test_integer_rate_products_are_exact(self):
        # 0.9 * 10 = 9.000000000000002 in floats; both roundings must not slip.
        assert scheme_subspace_dim(0.9, 10, 2048) == 512
        assert ceiling_subspace_dim(0.9, 10, 2048) == 512
        assert scheme_subspace_dim(1.0, 12, 4096) == 4096

    def test_rate_zero(self):
        assert scheme_subspace_dim(0.0, 8, 256) == 1
        assert ceiling_subspace_dim(0.0, 8, 256) == 1


class TestTypicalSubspace:
    def test_stable_tie_breaking(self):
        sub = typical_subspace_from_weights(np.array([0.25, 0.5, 0.25]), 2)
        np.testing.assert_array_equal(sub.coordinates, [1, 0])
        assert abs(sub.eta - 0.25) <= 1e-15

    def test_dense_matches_spectrum(self, rng):
        rho = sampling.random_density(5, rng)
        sub = typical_subspace(rho, 3)
        from mixcomp.qmat import eig_hermitian

        vals = eig_hermitian(rho.matrix).eigenvalues
        assert abs(sub.eta - (1 - vals[:3].sum())) <= 1e-10
        pi = sub.projector()
        assert np.max(np.abs(pi @ pi - pi)) <= 1e-10

    def test_domain(self, rng):
        rho = sampling.random_density(3, rng)
        with pytest.raises(DomainError):
            typical_subspace(rho, 0)
        with pytest.raises(DomainError):
            typical_subspace(rho, 4)


class TestProjectAndPatch:
    def test_supported_state_unchanged(self):
        rho = diag_state(0.6, 0.4, 0.0)
        sub = typical_subspace(rho, 2)
        out = project_and_patch(rho, sub)
        assert np.max(np.abs(out.matrix - rho)) <= 1e-12

    def test_worked_example(self):
        # rho = diag(0.5, 0.3, 0.2) truncated to its top-2 eigenspace with the
        # lost mass patched onto the top eigenvector.
        rho = diag_state(0.5, 0.3, 0.2)
        sub = typical_subspace(rho, 2)
        out = project_and_patch(rho, sub)
        np.testing.assert_allclose(out.matrix, diag_state(0.7, 0.3, 0.0), atol=1e-12)
        f = fidelity(rho, out)
        expected = (math.sqrt(0.5 * 0.7) + math.sqrt(0.3 * 0.3)) ** 2
        assert abs(f - expected) <= 1e-10
        assert abs(expected - 0.7949647869859768) <= 1e-12
        assert f >= (1 - sub.eta) ** 2

    def test_lemma_a2_random(self, rng):
        for _ in range(60):
            d = int(rng.integers(2, 9))
            rho = sampling.random_density(d, rng)
            k = int(rng.integers(1, d + 1))
            sub = typical_subspace(rho, k)
            out = project_and_patch(rho, sub)
            f = fidelity(rho, out)
            assert f >= (1 - sub.eta) ** 2 - 1e-8
            assert f >= 1 - 2 * sub.eta - 1e-8

    def test_dimension_mismatch(self, rng):
        rho = sampling.random_density(3, rng)
        sub = typical_subspace(sampling.random_density(4, rng), 2)
        with pytest.raises(DimensionMismatch):
            project_and_patch(rho, sub)


class TestLemmaA1Bound:
    def test_full_dimension(self, rng):
        rho = sampling.random_density(4, rng)
        assert abs(fidelity_subspace_upper_bound(rho, 4) - 1.0) <= 1e-10

    def test_flat_spectrum(self):
        assert abs(fidelity_subspace_upper_bound(maximally_mixed(4), 1) - 0.25) <= 1e-12

    def test_random_supported_states(self, rng):
        for _ in range(60):
            d = int(rng.integers(2, 9))
            rho = sampling.random_density(d, rng)
            k = int(rng.integers(1, d + 1))
            basis = sampling.random_subspace(d, k, rng)
            supported = sampling.random_state_on_subspace(basis, rng)
            assert fidelity(rho, supported) <= fidelity_subspace_upper_bound(rho, k) + 1e-8


class TestScores:
    def test_identity_scheme(self):
        source = BlockSource.build(two_coin_base(), 6)
        assert abs(global_fidelity_score(source, IdentityScheme(source.full_dim)).value - 1.0) <= 1e-12
        assert abs(local_fidelity_score(source, IdentityScheme(source.full_dim)).value - 1.0) <= 1e-12

    def test_entangled_decoding_of_uncorrelated_source(self, bell_state):
        # The maximally mixed pair decoded to an entangled pure state: perfect
        # marginals (local score 1) but whole-block fidelity only 1/4.
        base = Ensemble.from_lists([1.0], [maximally_mixed(2)])
        source = BlockSource.build(base, 2)
        scheme = FixedOutputScheme(bell_state)
        assert abs(local_fidelity_score(source, scheme).value - 1.0) <= 1e-10
        assert abs(global_fidelity_score(source, scheme).value - 0.25) <= 1e-10

    def test_commuting_exact_sweep_high_rate(self):
        base = two_coin_base(0.9)
        source = BlockSource.build(base, 10)
        s_bar = vn_entropy(base.average())
        scheme = project_patch_scheme(source, s_bar + 0.25)
        score = global_fidelity_score(source, scheme, mode="exact")
        assert score.method == "exact-diagonal"
        assert score.n_terms == 2**10
        assert score.value > 0.9

    def test_local_dominates_global_on_commuting(self):
        base = two_coin_base(0.8)
        source = BlockSource.build(base, 5)
        for rate in (0.4, 0.8, 1.1):
            scheme = project_patch_scheme(source, rate)
            g = global_fidelity_score(source, scheme).value
            loc = local_fidelity_score(source, scheme).value
            assert loc >= g - 1e-8

    def test_local_dominates_global_per_string(self):
        # A single-state base has exactly one string, so the sweep value IS the
        # per-string value: block fidelity never beats the marginal product.
        for diag in ([0.7, 0.3], [0.55, 0.45], [0.9, 0.1]):
            base = Ensemble.from_lists([1.0], [diag_state(*diag)])
            for n in (3, 5):
                source = BlockSource.build(base, n)
                for rate in (0.2, 0.5, 0.9):
                    scheme = project_patch_scheme(source, rate)
                    g = global_fidelity_score(source, scheme).value
                    loc = local_fidelity_score(source, scheme).value
                    assert loc >= g - 1e-8

    def test_scores_within_unit_interval(self, rng):
        base = two_coin_base(0.7)
        source = BlockSource.build(base, 4)
        for rate in (0.2, 0.6, 1.0):
            scheme = project_patch_scheme(source, rate)
            g = global_fidelity_score(source, scheme).value
            loc = local_fidelity_score(source, scheme).value
            assert 0.0 <= g <= 1.0
            assert 0.0 <= loc <= 1.0

    def test_monte_carlo_matches_exact(self):
        base = two_coin_base(0.85)
        source = BlockSource.build(base, 6)
        scheme = project_patch_scheme(source, 0.9)
        exact = global_fidelity_score(source, scheme, mode="exact").value
        mc = global_fidelity_score(source, scheme, mode="mc", n_samples=3000, seed=11)
        assert mc.method == "monte-carlo"
        assert mc.stderr is not None and mc.stderr > 0
        assert abs(mc.value - exact) <= 5 * mc.stderr + 1e-6

    def test_monte_carlo_worker_count_invariance(self):
        base = two_coin_base(0.85)
        source = BlockSource.build(base, 6)
        scheme = project_patch_scheme(source, 0.9)
        serial = global_fidelity_score(source, scheme, mode="mc", n_samples=1500, seed=7, workers=1)
        threaded = global_fidelity_score(source, scheme, mode="mc", n_samples=1500, seed=7, workers=4)
        assert serial.value == threaded.value
        assert serial.stderr == threaded.stderr

    def test_exact_mode_rejects_large_sweeps(self, rng):
        # Non-diagonal three-state base: no fast path, too many strings.
        states = [sampling.random_density(2, rng) for _ in range(3)]
        base = Ensemble.from_lists([0.3, 0.3, 0.4], states)
        source = BlockSource.build(base, 8)
        scheme = project_patch_scheme(source, 1.2)
        with pytest.raises(DimensionOverflow):
            global_fidelity_score(source, scheme, mode="exact", exact_cap=1000)

    def test_dense_mc_on_noncommuting(self, rng):
        states = [sampling.random_density(2, rng) for _ in range(2)]
        base = Ensemble.from_lists([0.5, 0.5], states)
        source = BlockSource.build(base, 3)
        scheme = project_patch_scheme(source, vn_entropy(base.average()) + 0.4)
        score = global_fidelity_score(source, scheme, mode="mc", n_samples=300, seed=2)
        assert 0.0 <= score.value <= 1.0


class TestCommonEigenbasis:
    def test_diagonal_states(self):
        assert common_eigenbasis(two_coin_base()) is not None

    def test_rotated_commuting_pair(self, rng):
        r1, r2, _ = sampling.random_commuting_pair(3, rng)
        ens = Ensemble.from_lists([0.4, 0.6], [r1, r2])
        basis = common_eigenbasis(ens)
        assert basis is not None
        diag_ens, _ = diagonalized(ens)
        for orig, diag in zip(ens.states, diag_ens.states):
            assert abs(vn_entropy(orig) - vn_entropy(diag)) <= 1e-8

    def test_noncommuting_returns_none(self, rng):
        states = [sampling.random_density(3, rng) for _ in range(2)]
        ens = Ensemble.from_lists([0.5, 0.5], states)
        assert common_eigenbasis(ens) is None


class TestTheorem7Demo:
    def test_ceiling_sequence_matches_binomial_oracle(self):
        base = two_coin_base(0.9)  # mean state diag(0.5, 0.5)
        rows = theorem7_demo(base, 0.15, [4, 8, 12])
        for row in rows:
            oracle = top_product_sum_oracle(
                (0.5, 0.5), row.n_blocks,
                ceiling_subspace_dim(row.rate_down, row.n_blocks, 2**row.n_blocks),
            )
            assert abs(row.ceiling - oracle) <= 1e-12

    def test_skewed_mean_state_oracle(self):
        base = Ensemble.from_lists([1.0], [diag_state(0.7, 0.3)])
        rows = theorem7_demo(base, 0.1, [4, 8])
        for row in rows:
            oracle = top_product_sum_oracle((0.7, 0.3), row.n_blocks, row.ceiling_dim)
            assert abs(row.ceiling - oracle) <= 1e-12

    def test_ceiling_strictly_decreasing(self):
        rows = theorem7_demo(two_coin_base(0.9), 0.15, [4, 8, 12])
        ceilings = [r.ceiling for r in rows]
        assert ceilings[0] > ceilings[1] > ceilings[2]
        assert ceilings[2] < 0.8

    def test_achieved_fidelity_above_patch_bounds(self):
        rows = theorem7_demo(two_coin_base(0.9), 0.15, [4, 8, 12])
        for row in rows:
            assert row.achieved >= 1 - 2 * row.eta_plus - 1e-9
            assert row.achieved >= (1 - row.eta_plus) ** 2 - 1e-9

    def test_single_pure_state_ceiling_one(self):
        base = Ensemble.from_lists([1.0], [diag_state(1.0, 0.0)])
        rows = theorem7_demo(base, 0.25, [3, 6])
        for row in rows:
            assert row.rate_down == 0.0
            assert abs(row.ceiling - 1.0) <= 1e-12
            assert abs(row.achieved - 1.0) <= 1e-10

    def test_maximally_mixed_binomial_tail(self):
        # At 0.9 qubits/signal on a flat mean state the retained fraction is
        # ceil(2^(0.9 N)) / 2^N, which drops below one half from N = 12 on.
        base = Ensemble.from_lists([1.0], [maximally_mixed(2)])
        source = BlockSource.build(base, 12)
        ceiling, retained = lemma_a1_ceiling(source, 0.9)
        assert retained == math.ceil(2 ** (0.9 * 12))  # 1783
        assert abs(ceiling - retained / 4096) <= 1e-12
        assert ceiling < 0.5

    def test_monotone_tail_at_fixed_rate(self):
        base = two_coin_base(0.9)
        for n in (4, 6):
            c_n, _ = lemma_a1_ceiling(BlockSource.build(base, n), 0.8)
            c_2n, _ = lemma_a1_ceiling(BlockSource.build(base, 2 * n), 0.8)
            assert c_2n <= c_n + 1e-9

    def test_block_source_cap(self):
        with pytest.raises(DimensionOverflow):
            BlockSource.build(two_coin_base(), 13)
